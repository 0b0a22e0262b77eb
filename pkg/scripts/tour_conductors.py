"""Swan and refined Swan conductors of a few Artin-Schreier characters.

    python scripts/tour_conductors.py
"""

from __future__ import annotations

from refrad.conductors import ASCharacter, df_oracle, dwork_module, reduce_AS, refined_swan
from refrad.gf import GF
from refrad.variation import break_decomposition


def main() -> None:
    a = GF(2, 2).gen()
    chars = [
        ASCharacter(2, 1, ((3, (), 1),)),
        ASCharacter(2, 2, ((4, (), a),)),
        ASCharacter(3, 1, ((1, (1,), 1),), ("b1",)),
        ASCharacter(5, 1, ((2, (), 2), (1, (), 1))),
    ]
    for chi in chars:
        red = reduce_AS(chi)
        bd = break_decomposition(dwork_module(red))
        rc = refined_swan(chi)
        print(chi)
        print("  reduced:", red)
        print("  Swan:", bd.swan, " Artin:", bd.artin)
        print("  rsw:", rc, " (i d f:", df_oracle(chi), ")")


if __name__ == "__main__":
    main()
