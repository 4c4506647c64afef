"""Brute-force order of the kernel of (M[S]_0)_G,tors -> M[S]_G,tors.

Independent of the C++ code: the degree-zero lattice is taken inside Z^(r*|S|)
as the kernel of the total-sum map, and kernel elements are found by
enumerating every torsion class of the domain.
"""
import itertools
import json
import subprocess
import sys

from sympy import Matrix, ZZ, eye, zeros
from sympy.matrices.normalforms import smith_normal_decomp


def smith(m):
    s, u, v = smith_normal_decomp(m, domain=ZZ)
    return s, u, v


def saturated_kernel(m):
    """Integer basis of {x : m x = 0} as columns."""
    s, u, v = smith(m)
    rank = sum(1 for i in range(min(s.shape)) if s[i, i] != 0)
    return v[:, rank:]


def in_column_span(rel, x):
    if rel.shape[1] == 0:
        return all(e == 0 for e in x)
    s, u, _ = smith(rel)
    y = u * x
    for i in range(y.shape[0]):
        d = s[i, i] if i < min(s.shape) else 0
        if d == 0:
            if y[i] != 0:
                return False
        elif y[i] % d != 0:
            return False
    return True


def klein():
    elems = [(a, b) for a in range(2) for b in range(2)]
    mul = lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)
    return elems, mul


def cyclic(n):
    elems = list(range(n))
    return elems, lambda x, y: (x + y) % n


def place_action(elems, mul, act, subgroups):
    """Block matrices for G acting on M[S], S = union of G/D."""
    points = []
    for d in subgroups:
        seen = []
        for g in elems:
            coset = frozenset(mul(g, h) for h in d)
            if coset not in seen:
                seen.append(coset)
        points.extend(seen)
    r = act[elems[0]].shape[0]
    n = len(points)
    mats = {}
    for g in elems:
        big = zeros(r * n, r * n)
        for j, pt in enumerate(points):
            image = frozenset(mul(g, x) for x in pt)
            i = points.index(image)
            big[i * r:(i + 1) * r, j * r:(j + 1) * r] = act[g]
        mats[g] = big
    return mats, n, r


def sha_order(elems, mul, act, subgroups):
    mats, n, r = place_action(elems, mul, act, subgroups)
    size = n * r
    total = Matrix.hstack(*[eye(r) for _ in range(n)]) if n else zeros(r, 0)
    basis = saturated_kernel(total)  # lattice of M[S]_0
    k = basis.shape[1]
    if k == 0:
        return 1
    # I_G applied to M[S]_0 and to M[S], as columns in Z^size.
    rel0 = Matrix.hstack(*[(mats[g] - eye(size)) * basis for g in elems])
    rel_full = Matrix.hstack(*[mats[g] - eye(size) for g in elems])
    # Coordinates of rel0 in the basis of M[S]_0.
    coords = basis.solve_least_squares(rel0)
    assert all(c.is_integer for c in coords)
    s, u, _ = smith(coords)
    uinv = u.inv()
    factors = [(i, s[i, i]) for i in range(min(s.shape)) if s[i, i] not in (0, 1)]
    count = 0
    for digits in itertools.product(*[range(int(d)) for _, d in factors]):
        y = zeros(k, 1)
        for (i, _), c in zip(factors, digits):
            y[i] = c
        x = basis * (uinv * y)
        if in_column_span(rel_full, x):
            count += 1
    return count


def gaussian_z4():
    elems, mul = cyclic(4)
    i = Matrix([[0, -1], [1, 0]])
    act = {g: i ** g for g in elems}
    return elems, mul, act


def klein_augmentation():
    elems, mul = klein()
    perm = {}
    for g in elems:
        p = zeros(4, 4)
        for j, x in enumerate(elems):
            p[elems.index(mul(g, x)), j] = 1
        perm[g] = p
    aug = saturated_kernel(Matrix([[1, 1, 1, 1]]))
    act = {g: aug.solve_least_squares(perm[g] * aug) for g in elems}
    return elems, mul, act


def main():
    elems, mul, act = klein_augmentation()
    cyclic_subs = [[(0, 0), (1, 0)], [(0, 0), (0, 1)], [(0, 0), (1, 1)]]
    results = {"klein_three_cyclic": sha_order(elems, mul, act, cyclic_subs)}
    elems, mul, act = gaussian_z4()
    results["z4_two_full_places"] = sha_order(elems, mul, act, [elems, elems])
    results["z4_full_and_delta"] = sha_order(elems, mul, act, [elems, [0, 2]])
    print(json.dumps(results, sort_keys=True))
    if len(sys.argv) > 1:
        # Compare with the command-line tool on the shipped scenarios.
        tool, scenario_dir = sys.argv[1], sys.argv[2]
        ok = True
        for name, expected in results.items():
            out = subprocess.run([tool, "sha1", f"{scenario_dir}/sha_{name}.json"],
                                 capture_output=True, text=True, check=True).stdout
            got = int(json.loads(out)["result"]["sha1_S"]["order"])
            shapiro = int(json.loads(out)["result"]["sha1_shapiro"]["order"])
            print(name, expected, got, shapiro)
            ok = ok and got == expected and shapiro == expected
        sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
