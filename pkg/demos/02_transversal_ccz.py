"""Check that physical CCZ on every qubit triple acts as a single logical
CCZ, by enumerating the phase over all coset triples."""

from triortho.codes import build_code, builtin_15_1_3
from triortho.simulator import transversal_ccz_phase_check

code = build_code(builtin_15_1_3())

# For each triple of logical basis labels, the product of (-1)^{u_i v_i w_i}
# over all 16^3 coset representative combinations must be one constant
# phase, equal to the CCZ phase (-1)^{abc} of the labels.
print("labels -> phase (uniform over", 16**3, "terms each)")
all_ok = True
for a in (0, 1):
    for b in (0, 1):
        for c in (0, 1):
            check = transversal_ccz_phase_check(code, [(a,), (b,), (c,)])
            mark = "" if check.matches and check.uniform else "  <-- MISMATCH"
            print(f"  ({a},{b},{c}) -> {check.phase:+d}{mark}")
            all_ok &= check.matches and check.uniform

print("\nall labels correct:", all_ok)

# The same machinery handles lower levels: a level-2 matrix supports a
# transversal CZ between two blocks.
from triortho.codes import TriorthogonalMatrix
from triortho.gf2 import BitMatrix, BitVector
from triortho.simulator import transversal_multi_cz_phase_check

tiny = TriorthogonalMatrix.from_matrix(
    BitMatrix([BitVector.from_string("111")]), level=2
)
tiny_code = build_code(tiny)
for labels in (((0,), (1,)), ((1,), (1,))):
    check = transversal_multi_cz_phase_check(tiny_code, labels)
    print(f"CZ on labels {labels} -> {check.phase:+d} (expected {check.expected:+d})")
