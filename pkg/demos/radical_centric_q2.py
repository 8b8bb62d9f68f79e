"""Enumerate the S-centric, S-radical classes at q = 2 and print them as markdown."""
from __future__ import annotations

from sylowlie import chevalley as ch
from sylowlie import radenum


def main():
    for fam in ("g2", "su4"):
        rep = radenum.enumerate_rc(ch.build_group(fam, 2))
        print(rep.to_markdown())
        print(f"matches the expected catalog: {rep.matches}\n")


if __name__ == "__main__":
    main()
