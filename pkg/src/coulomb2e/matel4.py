"""Four-body matrix elements for two positive and two negative unit charges.

The basis is exp(-a r13 - b r14 - c r23 - d r24) (no explicit r12/r34
dependence).  Every element is a mixed partial derivative, at u=0, of

    F4(a, b, c, d, u) = 16/((a-b)(a+b)(c-d)(c+d))
                        * log[ (b+c+u)(a+d+u) / ((a+c+u)(b+d+u)) ],

where inside F4 the arguments follow the generating-function order
(r13, r23, r14, r24) and u screens r12.  The prefactor 16 absorbs the angular
constant consistently with the three-body convention (the bare distance
integral carries 1/4 of these values; the oracle uses the same convention).

The printed form of F4 is numerically disastrous near a=b or c=d, and the
derivatives needed here amplify any cancellation.  With S = (a+b+c+d)/2 + u,
p = a-b, q = c-d and

    u1 = S^2 - (p-q)^2/4,   u2 = S^2 - (p+q)^2/4   (both > 0 in the domain),

one has log(u1/u2)/(p q) = 2 atanh(r)/r / (u1+u2) with r = (u1-u2)/(u1+u2),
and atanh(r)/r is analytic in r^2 on |r| < 1.  Evaluating that by its series
for small |r| (and directly otherwise) is stable for every admissible
argument, including exact degeneracy; the series switch engages well before
the printed form loses precision.
"""

from functools import lru_cache

import numpy as np

from .jets import Jet
from .model import MatBlock

_R_SWITCH = 0.3
_SERIES_K = 18


def f4(a, b, c, d, u=0.0):
    """Scalar F4 value (argument order r13, r23, r14, r24, r12-screen)."""
    S = 0.5 * (a + b + c + d) + u
    p, q = a - b, c - d
    u1 = S * S - 0.25 * (p - q) ** 2
    u2 = S * S - 0.25 * (p + q) ** 2
    if u1 <= 0 or u2 <= 0:
        raise ValueError("f4 domain: non-positive log argument")
    r = (u1 - u2) / (u1 + u2)
    if abs(r) < _R_SWITCH:
        g = sum(r ** (2 * k) / (2 * k + 1) for k in range(_SERIES_K, -1, -1))
    else:
        g = np.arctanh(r) / r
    return 16.0 * 2.0 * g / (u1 + u2) / ((a + b) * (c + d))


def _f4_jet(a, b, c, d, orders):
    sh = tuple(o + 1 for o in orders)
    A = Jet.variable(a, 0, sh)
    B = Jet.variable(b, 1, sh)
    C = Jet.variable(c, 2, sh)
    D = Jet.variable(d, 3, sh)
    U = Jet.variable(0.0, 4, sh)
    S = 0.5 * (A + B + C + D) + U
    p = A - B
    q = C - D
    u1 = S * S - 0.25 * ((p - q) * (p - q))
    u2 = S * S - 0.25 * ((p + q) * (p + q))
    if u1.val <= 0 or u2.val <= 0:
        raise ValueError("f4 domain: non-positive log argument")
    usr = (u1 + u2).recip()
    r = (u1 - u2) * usr
    if abs(r.val) < _R_SWITCH:
        r2 = r * r
        g = Jet.const(0.0, sh)
        for k in range(_SERIES_K, 0, -1):
            g = (g + 1.0 / (2 * k + 1)) * r2
        g = g + 1.0
    else:
        one = Jet.const(1.0, sh)
        g = 0.5 * ((one + r) * (one - r).recip()).log() * r.recip()
    return 32.0 * g * usr * ((A + B) * (C + D)).recip()


# one jet per argument set covers every pattern used below
_ORDERS = (2, 2, 2, 2, 3)


@lru_cache(maxsize=4096)
def _f4_table(a, b, c, d):
    return _f4_jet(a, b, c, d, _ORDERS)


def g4(idx, a, b, c, d):
    """Signed mixed partial (-1)^|idx| d^idx F4 at u=0; idx=(i,j,k,l,m)."""
    if any(o1 > o2 for o1, o2 in zip(idx, _ORDERS)):
        raise ValueError("derivative order beyond supported maximum")
    F = _f4_table(float(a), float(b), float(c), float(d))
    return (-1.0) ** sum(idx) * F.deriv(idx)


def moment4(i, j, k, l, m, a, b, c, d):
    """Moment int r13^i r23^j r14^k r24^l r12^(m-1) exp(-...) d(distances)."""
    return g4((i, j, k, l, m), a, b, c, d)


# ---------------------------------------------------------------------------
# term plumbing.  ExpTerm4 tuples are (a, b, c, d) on (r13, r14, r23, r24);
# the generating function wants (r13, r23, r14, r24), hence the b<->c swap.


def _to_F(t):
    return (t[0], t[2], t[1], t[3])


def _pair_args(t, tp):
    return tuple(x + y for x, y in zip(_to_F(t), _to_F(tp)))


def overlap4(t, tp):
    return moment4(1, 1, 1, 1, 1, *_pair_args(t, tp))


def coulomb4(pair, t, tp):
    """<t| 1/r_pair |t'> for any of the six pairs ('12','34','13','14','23','24')."""
    A, B, C, D = _pair_args(t, tp)
    if pair == "12":
        return moment4(1, 1, 1, 1, 0, A, B, C, D)
    if pair == "34":
        # relabeling 1<->2 swaps (r13,r23) and (r14,r24) roles: v34 = v12 at (A,C,B,D)
        return moment4(1, 1, 1, 1, 0, A, C, B, D)
    lower = {"13": (0, 1, 1, 1, 1), "23": (1, 0, 1, 1, 1),
             "14": (1, 1, 0, 1, 1), "24": (1, 1, 1, 0, 1)}[pair]
    return moment4(*lower, A, B, C, D)


def _p3sq(t, tp):
    # particle 3 touches r13 and r23; their F-order exponents are (a, b)
    a, b, c, d = _to_F(t)
    ap, bp, cp, dp = _to_F(tp)
    A, B, C, D = _pair_args(t, tp)
    n = moment4(1, 1, 1, 1, 1, A, B, C, D)
    x3 = 0.5 * (moment4(0, 0, 1, 1, 3, A, B, C, D)
                - moment4(2, 0, 1, 1, 1, A, B, C, D)
                - moment4(0, 2, 1, 1, 1, A, B, C, D))
    return (a * ap + b * bp) * n - (a * bp + ap * b) * x3


def _p4sq(t, tp):
    c, d = _to_F(t)[2:]
    cp, dp = _to_F(tp)[2:]
    A, B, C, D = _pair_args(t, tp)
    n = moment4(1, 1, 1, 1, 1, A, B, C, D)
    x4 = 0.5 * (moment4(1, 1, 0, 0, 3, A, B, C, D)
                - moment4(1, 1, 2, 0, 1, A, B, C, D)
                - moment4(1, 1, 0, 2, 1, A, B, C, D))
    return (c * cp + d * dp) * n - (c * dp + cp * d) * x4


def _relabel_1324(t):
    # simultaneous relabel 1<->3, 2<->4: fixes r13 and r24, swaps r14<->r23,
    # and maps r12 into the r34 slot.  In the spec tuple that swaps b and c.
    return (t[0], t[2], t[1], t[3])


def kinetic4(particle, t, tp):
    """<t| p_particle^2 |t'>.

    The generating function gives the pattern for particles 3 and 4 directly;
    particles 1 and 2 follow from relabeling both positives into the negative
    slots (1<->3, 2<->4), under which the basis family maps onto itself.
    """
    if particle == 3:
        return _p3sq(t, tp)
    if particle == 4:
        return _p4sq(t, tp)
    if particle == 1:
        return _p3sq(_relabel_1324(t), _relabel_1324(tp))
    if particle == 2:
        return _p4sq(_relabel_1324(t), _relabel_1324(tp))
    raise ValueError("particle must be 1..4")


_PAIR_SIGNS = (("12", +1.0), ("34", +1.0), ("13", -1.0),
               ("23", -1.0), ("14", -1.0), ("24", -1.0))


def assemble4(groups, spec):
    """N, T, V matrices over symmetrized four-body term groups.

    `groups` is a list of basis vectors, each a list of (weight, term-tuple)
    pairs carrying whatever identical-particle symmetrization the spec's mass
    pattern allows.  The basis is translation invariant, so the lab-frame
    kinetic sum equals the internal kinetic energy.
    """
    invm = spec.inv_masses
    m = len(groups)
    N = np.zeros((m, m))
    T = np.zeros((m, m))
    V = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            sn = st = sv = 0.0
            for wi, ti in groups[i]:
                for wj, tj in groups[j]:
                    w = wi * wj
                    sn += w * overlap4(ti, tj)
                    st += w * sum(0.5 * invm[p - 1] * kinetic4(p, ti, tj)
                                  for p in range(1, 5) if invm[p - 1] != 0.0)
                    sv += w * sum(s * coulomb4(pr, ti, tj)
                                  for pr, s in _PAIR_SIGNS)
            N[i, j] = N[j, i] = sn
            T[i, j] = T[j, i] = st
            V[i, j] = V[j, i] = sv
    return MatBlock(N, T, V)


def symmetrized_group(t, positives_identical=True, negatives_identical=True):
    """Orbit of one term under the allowed identical-particle exchanges.

    Positive exchange 1<->2 maps (a,b,c,d) -> (c,d,a,b); negative exchange
    3<->4 maps (a,b,c,d) -> (b,a,d,c).  Only exchanges within equal-mass
    groups are applied.
    """
    tt = t.as_tuple() if hasattr(t, "as_tuple") else tuple(t)
    orbit = {tt}
    if positives_identical:
        orbit |= {(x[2], x[3], x[0], x[1]) for x in list(orbit)}
    if negatives_identical:
        orbit |= {(x[1], x[0], x[3], x[2]) for x in list(orbit)}
    return [(1.0, x) for x in sorted(orbit)]


# ---------------------------------------------------------------------------
# the one-parameter symmetric family: terms (a,b,b,a) + (b,a,a,b), a+b=1,
# beta = a-b.  Closed forms for the reduced matrix elements (the general
# assembler reproduces them times a common constant).


def ho_ntv(beta):
    """Reduced (n, t, v) of the symmetric exponential pair at a+b=1, a-b=beta.

    v is the magnitude of the (attractive-dominated) potential expectation:
    the reduced energy of the family is -v^2/(4 t n).  The bracket inside v
    has a removable singularity at beta=0 (limit 25/12); below beta=0.1 it is
    evaluated by its series, which agrees with the closed form to ~1e-10 at
    the switch.
    """
    if not 0.0 <= beta < 1.0:
        raise ValueError("ho_ntv needs 0 <= beta < 1")
    b2 = beta * beta
    omb = 1.0 - b2
    n = 33.0 / 16.0 + (33.0 - 22.0 * b2 + 5.0 * b2 * b2) / (16.0 * omb**3)
    t = 21.0 / 8.0 - 1.5 * b2 + (21.0 - 6.0 * b2 + b2 * b2) / (8.0 * omb**3)
    if beta < 0.1:
        # bracket = 1 - 5 b2/8 + (1/4) sum_{m>=3} d_m b2^{m-3},
        # d_m = sum_i binom-poly[i]/(m-i); the m=1,2 terms cancel the
        # 1/(4 beta^4) and 7/(8 beta^2) singular pieces exactly
        poly = (1.0, -4.0, 6.0, -4.0, 1.0)
        acc = 0.0
        for m in range(32, 2, -1):
            # log-series index m - i must stay >= 1
            dm = sum(poly[i] / (m - i) for i in range(min(4, m - 1) + 1))
            acc = acc * b2 + dm
        bracket = 1.0 - 5.0 * b2 / 8.0 + 0.25 * acc
    else:
        bracket = (1.0 - 5.0 * b2 / 8.0 - 1.0 / (4.0 * b2 * b2)
                   + 7.0 / (8.0 * b2)
                   + omb**4 / (4.0 * b2**3) * np.log(1.0 / omb))
    v = (19.0 / 6.0 + (21.0 - 18.0 * b2 + 5.0 * b2 * b2) / (4.0 * omb**3)
         - bracket / omb**2)
    return n, t, v
