"""Close and Fermat suprema on a handful of sets."""
from gennum.suprema import FERMAT, SHARP, find_inf, find_sup, is_AUB, parse_setdescr, sigma_net

SETS = ["interval(0,1,open,open)", "recipN", "DINF",
        "points(2 on EVEN, 1 on ODD)", "powfam"]

for src in SETS:
    S = parse_setdescr(src)
    print("%-30s sup %-24r inf %r" % (src, find_sup(S), find_inf(S)))

# real interval: Fermat sup exists, the sharp one does not
R = parse_setdescr("realinterval(0,1,open,open)")
print("(0,1)_R  sharp %r  fermat %r" % (find_sup(R, SHARP), find_sup(R, FERMAT)))

# the choice net behind an interleaved set
print("sigma_net:", sigma_net(parse_setdescr("points(2 on EVEN, 1 on ODD)")))
print("3 is an AUB of (0,1) of order", is_AUB("3", parse_setdescr("interval(0,1,open,open)")))
