"""Independent brute-force oracles used across the test suite: plane
partitions as cube sets, symmetry actions on cubes, skew tableaux, and
Schur specializations."""

from itertools import product

from kasteleyn.rings import LaurentPoly


def plane_partitions(a, b, c):
    """All downward-closed subsets of the a x b x c box, as frozensets of
    (i, j, k) cubes."""
    cols = list(product(range(a), range(b)))

    def rec(idx, heights):
        if idx == len(cols):
            cubes = frozenset(
                (i, j, k)
                for (i, j), h in heights.items()
                for k in range(h)
            )
            yield cubes
            return
        i, j = cols[idx]
        hi = c
        if i > 0:
            hi = min(hi, heights[i - 1, j])
        if j > 0:
            hi = min(hi, heights[i, j - 1])
        for h in range(hi + 1):
            heights[i, j] = h
            yield from rec(idx + 1, heights)
        del heights[i, j]

    yield from rec(0, {})


def cube_map(group, a, b, c):
    """Generators of the symmetry action on cubes of the a x b x c box."""
    def rho(cube):
        i, j, k = cube
        return (j, k, i)

    def tau(cube):
        i, j, k = cube
        return (i, k, j)

    def kappa_set(cubes):
        box = set(product(range(a), range(b), range(c)))
        return frozenset(
            (a - 1 - i, b - 1 - j, c - 1 - k) for (i, j, k) in box - set(cubes)
        )

    return rho, tau, kappa_set


def group_elements_on_pp(group, a, b, c):
    """The group as maps on plane partitions (cube sets)."""
    rho, tau, kappa_set = cube_map(group, a, b, c)

    def lift(f):
        return lambda cubes: frozenset(f(x) for x in cubes)

    ident = lambda s: s
    R = lift(rho)
    T = lift(tau)
    K = kappa_set
    R2 = lambda s: R(R(s))
    table = {
        "1": [ident],
        "rho": [ident, R, R2],
        "tau": [ident, T],
        "kappa": [ident, K],
        "rho,kappa": [ident, R, R2, K, lambda s: K(R(s)), lambda s: K(R2(s))],
        "kappa-tau": [ident, lambda s: K(T(s))],
        "tau,kappa": [ident, T, K, lambda s: K(T(s))],
        "tau,rho": [ident, R, R2, T, lambda s: T(R(s)), lambda s: T(R2(s))],
        "kappa-tau,rho": [
            ident, R, R2,
            lambda s: K(T(s)), lambda s: K(T(R(s))), lambda s: K(T(R2(s))),
        ],
        "tau,rho,kappa": [
            ident, R, R2, T, lambda s: T(R(s)), lambda s: T(R2(s)),
            K, lambda s: K(R(s)), lambda s: K(R2(s)),
            lambda s: K(T(s)), lambda s: K(T(R(s))), lambda s: K(T(R2(s))),
        ],
    }
    return table[group]


def invariant_pps(group, a, b, c):
    els = group_elements_on_pp(group, a, b, c)
    out = []
    for pp in plane_partitions(a, b, c):
        if all(g(pp) == pp for g in els):
            out.append(pp)
    return out


def pp_qgen_cubes(pps):
    """Generating Laurent polynomial by cube count."""
    total = LaurentPoly.zero()
    for pp in pps:
        total = total + LaurentPoly.q_power(len(pp))
    return total


def pp_qgen_orbits(pps, group, a, b, c):
    """Generating polynomial by number of cube orbits."""
    rho, tau, kappa_set = cube_map(group, a, b, c)

    def cube_orbit_count(pp, group):
        gens = []
        if group in ("rho", "tau,rho"):
            gens.append(rho)
        if group in ("tau", "tau,rho"):
            gens.append(tau)
        if group == "rho":
            gens = [rho]
        if group == "tau":
            gens = [tau]
        seen = set()
        orbits = 0
        for cube in pp:
            if cube in seen:
                continue
            orbits += 1
            stack = [cube]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                for g in gens:
                    stack.append(g(x))
        return orbits

    total = LaurentPoly.zero()
    for pp in pps:
        total = total + LaurentPoly.q_power(cube_orbit_count(pp, group))
    return total


def polys_equal_up_to_unit(f, g):
    """True when f = +-q^k g."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    _, _, fn = f.unit_normalize()
    _, _, gn = g.unit_normalize()
    return fn == gn


def skew_tableaux_qgen(lam, mu, a):
    """Sum of q^(sum of (entry - 1)) over semistandard skew tableaux of
    shape lam/mu with entries in 1..a; equals s_{lam/mu}(1, q, .., q^(a-1))."""
    lam = list(lam)
    mu = list(mu) + [0] * (len(lam) - len(mu))
    rows = len(lam)
    cells = [(r, c) for r in range(rows) for c in range(mu[r], lam[r])]
    total = LaurentPoly.zero()

    def rec(idx, filling, weight):
        nonlocal total
        if idx == len(cells):
            total = total + LaurentPoly.q_power(weight)
            return
        r, c = cells[idx]
        lo = 1
        if c > mu[r]:
            lo = max(lo, filling[r, c - 1])
        if r > 0 and c >= mu[r - 1] and c < lam[r - 1]:
            lo = max(lo, filling[r - 1, c] + 1)
        for v in range(lo, a + 1):
            filling[r, c] = v
            rec(idx + 1, filling, weight + v - 1)
        filling.pop((r, c), None)

    rec(0, {}, 0)
    return total
