"""Run every registered check at its smallest supported field and print the verdicts."""
from __future__ import annotations

from sylowlie import lemmas


def main():
    for k, lem in lemmas.REGISTRY.items():
        for fam in lem.families:
            print(lemmas.verify(k, fam, min(lem.support)).summary())


if __name__ == "__main__":
    main()
