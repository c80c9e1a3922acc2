"""Hyperlimits of a few sequences, with the probe labels that witness each threshold.

Run:  python demos/hyperlimits.py
"""
from gennum.hyper import HyperSeq, hyperlim, is_cauchy, limsup, liminf

CASES = [
    ("1/n", None),
    ("(1 - drho)^n", None),
    ("(1 + 1/n)^n", None),
    ("1/log(n)", "exp(-rho^(-1/rho))"),
    ("1/log(n)", None),          # sigma = rho is too slow a gauge here
    ("(-1)^n", None),
]


def main():
    for term, sigma in CASES:
        seq = HyperSeq(term, sigma=sigma)
        r = hyperlim(seq)
        print("%-14s sigma=%-20s %s  st=%s" % (term, sigma or "rho", r.status, r.limit_st()))
        for q, label in sorted(r.thresholds.items())[:3]:
            print("    q=%d from %s" % (q, label))
        print("    cauchy: %s" % is_cauchy(seq).status)

    osc = HyperSeq("(-1)^n")
    print("limsup (-1)^n =", limsup(osc).to_dict()["value_st"])
    print("liminf (-1)^n =", liminf(osc).to_dict()["value_st"])


if __name__ == "__main__":
    main()
