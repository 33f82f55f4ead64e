#!/usr/bin/env python3
"""Independent spectrum oracle for the monodromy of x_0^{a_0} + ... + x_m^{a_m}.

The eigenvalues of the total monodromy on the rank prod(a_i - 1) lattice are
the products of nontrivial a_i-th roots of unity, one factor per variable.
This script derives the characteristic polynomial purely from that classical
description (grouping eigenvalues into cyclotomic factors), with no reference
to any intersection form or twist product, so it can arbitrate the library's
construction.

Usage:
  spectrum_oracle.py A0 A1 ...            print expected charpoly, ascending
  spectrum_oracle.py A0 A1 ... --check F  compare against the charpoly of the
                                          integer matrix in file F (rank
                                          header, then row-major entries);
                                          exit 0 on match, 1 on mismatch
  spectrum_oracle.py --fixture OUT        regenerate the frozen test fixture
"""
import itertools
import json
import math
import sys

from sympy import Integer, Poly, symbols, totient
from sympy.polys.specialpolys import cyclotomic_poly

t = symbols("t")


def expected_charpoly(exps):
    """Characteristic polynomial (monic, det(tI - M)) as a sympy Poly."""
    N = math.lcm(*exps)
    counts = {}
    for label in itertools.product(*(range(1, a) for a in exps)):
        s = sum(j * (N // a) for j, a in zip(label, exps)) % N
        d = 1 if s == 0 else N // math.gcd(s, N)
        counts[d] = counts.get(d, 0) + 1
    poly = Poly(1, t, domain="ZZ")
    for d, c in sorted(counts.items()):
        phi = int(totient(d))
        assert c % phi == 0, (exps, d, c, phi)
        poly = poly * Poly(cyclotomic_poly(d, t), t) ** (c // phi)
    return poly


def ascending_coeffs(poly):
    return [int(c) for c in reversed(poly.all_coeffs())]


def read_matrix(path):
    with open(path) as f:
        tokens = f.read().split()
    n = int(tokens[0])
    vals = [Integer(v) for v in tokens[1 : 1 + n * n]]
    assert len(vals) == n * n, "matrix file shorter than its rank header"
    from sympy import Matrix

    return Matrix(n, n, vals)


FIXTURE_EXTRAS = [(65,), (2, 2, 2, 2), (3, 3, 3, 3), (2, 4, 18), (4, 2), (3, 2, 4)]


def fixture_tuples():
    """Frozen enumeration: every tuple of 1..3 exponents, entries 2..9,
    nondecreasing, lattice rank <= 64, plus a few larger/unsorted extras."""
    out = [(a,) for a in range(2, 10)]
    out += [(a, b) for a in range(2, 10) for b in range(a, 10)]
    for a in range(2, 10):
        for b in range(a, 10):
            for c in range(b, 10):
                if (a - 1) * (b - 1) * (c - 1) <= 64:
                    out.append((a, b, c))
    out += FIXTURE_EXTRAS
    return out


def main(argv):
    if "--fixture" in argv:
        out_path = argv[argv.index("--fixture") + 1]
        rows = []
        for exps in fixture_tuples():
            poly = expected_charpoly(exps)
            rank = math.prod(a - 1 for a in exps)
            rows.append(
                {
                    "exponents": list(exps),
                    "rank": rank,
                    "charpoly": [str(c) for c in ascending_coeffs(poly)],
                }
            )
        with open(out_path, "w") as f:
            json.dump(rows, f, indent=1)
            f.write("\n")
        print("wrote %d tuples to %s" % (len(rows), out_path))
        return 0

    check_path = None
    if "--check" in argv:
        i = argv.index("--check")
        check_path = argv[i + 1]
        argv = argv[:i] + argv[i + 2 :]
    exps = [int(a) for a in argv]
    if not exps or any(a < 2 for a in exps):
        print(__doc__)
        return 2
    poly = expected_charpoly(exps)
    print(" ".join(str(c) for c in ascending_coeffs(poly)))
    if check_path is not None:
        M = read_matrix(check_path)
        got = M.charpoly(t)
        if got.as_expr() != poly.as_expr():
            print("MISMATCH: matrix charpoly %s" % got.as_expr())
            return 1
        print("MATCH")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
