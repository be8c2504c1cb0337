#!/usr/bin/env python3
"""Tour of pattern generation and the cyclic-ambiguity problem.

The receiver cannot know where a repeating pattern starts, so it searches all
cyclic shifts.  That search makes two patterns that are shifts of each other
(or of each other's negation) indistinguishable.  This demo shows how the
codebook sidesteps that by assigning one pattern per equivalence class.
"""

import numpy as np

from risid import (
    build_codebook,
    cyclic_ambiguity_classes,
    generate_hadamard,
    max_cyclic_crosscorr,
)


def main():
    print("Sylvester construction, order 8:")
    h = generate_hadamard(8)
    for i, row in enumerate(h):
        print(f"  row {i}: {' '.join('+' if v > 0 else '-' for v in row)}")
    print("orthogonality check: H @ H.T == 8*I ->",
          bool(np.array_equal(h @ h.T, 8 * np.eye(8, dtype=np.int64))))

    print("\nRow 0 is constant: it never modulates the reflection, so it is")
    print("excluded from assignment.  Among the rest, some rows alias:")
    classes = cyclic_ambiguity_classes([h[i] for i in range(1, 8)])
    for cls in classes:
        rows = [i + 1 for i in cls]
        print(f"  rows {rows} form one cyclic-equivalence class")
        if len(rows) > 1:
            a, b = h[rows[0]], h[rows[1]]
            print(f"    max cyclic cross-correlation between them: "
                  f"{max_cyclic_crosscorr(a, b):.1f} (fully ambiguous)")

    print("\nCodebook for 4 surfaces at length 16:")
    report = build_codebook(16, 4)
    for code in report.codes:
        bits = " ".join("+" if v > 0 else "-" for v in code.symbols)
        print(f"  RIS {code.ris_id}: {bits}")
    print(f"max pairwise cyclic cross-correlation of the assignment: "
          f"{report.max_pairwise_cyclic_corr}")
    print(f"class capacity at length 16: {len(report.ambiguity_classes)} surfaces")

    print("\nAsking for more surfaces than classes fails loudly:")
    try:
        build_codebook(4, 3)
    except Exception as exc:
        print(f"  {type(exc).__name__}: {exc}")


if __name__ == "__main__":
    main()
