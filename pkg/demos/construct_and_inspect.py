"""Build the Sylow subgroups at small q and print a few invariants."""
from __future__ import annotations

from sylowlie import chevalley as ch
from sylowlie import grptool as gt


def main():
    for fam, q in [("g2", 2), ("g2", 3), ("g2", 5), ("su4", 2), ("su4", 3)]:
        T = ch.build_group(fam, q)
        S = gt.whole(T)
        print(f"{T.family}({q}): |S| = {T.order}, |Z(S)| = {gt.center(S).order}, "
              f"exponent {T.exponent()}, rank of S/Phi(S) = {gt.frattini_rank(S)}")
    T = ch.build_group("g2", 3)
    for pair, terms in ch.reduced_table(T).items():
        print(pair, terms)


if __name__ == "__main__":
    main()
