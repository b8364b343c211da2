"""Bit-blasted encoding of depth-bounded synthesis over the discrete gates.

Layer-scale representation: the partial product after layer ``i`` is held as
an integer pair matrix ``(A_i + B_i * sqrt(2)) / sqrt(2)**i``; every layer
(even an all-Clifford one) multiplies the scale by sqrt(2), so column widths
are fixed up front.  Orthogonality of the partial product and of its Galois
conjugate bounds ``|A_i| <= sqrt(2)**i`` and ``|B_i| <= sqrt(2)**(i-1)``, so
``ceil(i/2) + 2`` two's-complement bits can never overflow.

Because generator entries are the constants 0, +-1, +-sqrt(2), a layer never
needs general multiplication: each row of the new partial product is a copy,
a negation, a doubling, or a two-term sum of rows of the previous one,
selected by the gate variables.  Adder gadgets are emitted in Tseitin form
gated on the selector, with constants folded at encode time.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import CapacityError, NotCovarianceError, NotOrthogonalError, RangeError
from ..ring import RingScalar
from ..somat import GateKind, GeneratorId, TransferMatrix
from .cnf import CnfInstance, VarMap, WcnfInstance

Bit = object  # int literal or bool constant

DEFAULT_VAR_LIMIT = 2_000_000


def generator_order(n: int) -> tuple[GeneratorId, ...]:
    """Fixed selector ordering: per-qubit T, Tinv, S, Sinv, then bond R, Rinv."""
    gens: list[GeneratorId] = []
    for q in range(1, n + 1):
        gens.append(GeneratorId(GateKind.T, q))
        gens.append(GeneratorId(GateKind.TINV, q))
        gens.append(GeneratorId(GateKind.S, q))
        gens.append(GeneratorId(GateKind.SINV, q))
    for q in range(1, n):
        gens.append(GeneratorId(GateKind.R, q))
        gens.append(GeneratorId(GateKind.RINV, q))
    return tuple(gens)


def layer_width(i: int) -> int:
    return (i + 1) // 2 + 2


class _Builder:
    def __init__(self) -> None:
        self.num_vars = 0
        self.clauses: list[tuple[int, ...]] = []

    def var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def clause(self, lits: Sequence[Bit], gate: int | None = None) -> None:
        out: list[int] = []
        for l in lits:
            if l is True:
                return
            if l is False:
                continue
            out.append(l)
        if gate is not None:
            out.append(-gate)
        if not out:
            raise CapacityError("encoding produced an empty clause")  # bug trap
        self.clauses.append(tuple(out))


def _neg(b: Bit) -> Bit:
    if isinstance(b, bool):
        return not b
    return -b


def _fit(bits: list[Bit], width: int) -> list[Bit]:
    """Sign-extend or truncate to ``width``; truncation is only used where
    value bounds guarantee the dropped bits replicate the sign."""
    if len(bits) >= width:
        return bits[:width]
    return bits + [bits[-1]] * (width - len(bits))


def _double(bits: list[Bit]) -> list[Bit]:
    return [False] + bits


def _vec_equal(b: _Builder, u: list[Bit], v: list[Bit]) -> None:
    """Unconditional bitwise equality; mixed constants are folded."""
    width = max(len(u), len(v))
    u = _fit(list(u), width)
    v = _fit(list(v), width)
    for x, y in zip(u, v):
        if isinstance(x, bool) and isinstance(y, bool):
            if x != y:
                fresh = b.var()
                b.clause([fresh])
                b.clause([-fresh])
        elif isinstance(x, bool):
            b.clause([y if x else _neg(y)])
        elif isinstance(y, bool):
            b.clause([x if y else _neg(x)])
        else:
            b.clause([-x, y])
            b.clause([x, -y])


def _xor_equal(b: _Builder, gate: int | None, out: int, terms: list[Bit]) -> None:
    """Emit out == xor(terms) under ``gate`` with constants folded."""
    parity = False
    vars_: list[int] = []
    for t in terms:
        if isinstance(t, bool):
            parity ^= t
        else:
            vars_.append(t)
    k = len(vars_)
    if k == 0:
        b.clause([out if parity else -out], gate)
    elif k == 1:
        v = vars_[0] if not parity else -vars_[0]
        b.clause([-out, v], gate)
        b.clause([out, -v], gate)
    elif k == 2:
        x, y = vars_
        sgn = -1 if parity else 1
        b.clause([-out, sgn * x, y], gate)
        b.clause([-out, -sgn * x, -y], gate)
        b.clause([out, sgn * x, -y], gate)
        b.clause([out, -sgn * x, y], gate)
    elif k == 3:
        x, y, z = vars_
        for sx in (1, -1):
            for sy in (1, -1):
                for sz in (1, -1):
                    want = (sx > 0) ^ (sy > 0) ^ (sz > 0) ^ parity
                    # under assignment (x,y,z) == (sx,sy,sz): out == want
                    b.clause([-sx * x, -sy * y, -sz * z, out if want else -out], gate)
    else:  # pragma: no cover - adders never exceed three terms
        raise CapacityError("xor arity above 3")


def _majority(b: _Builder, gate: int | None, terms: list[Bit]) -> Bit:
    """Return a literal (or constant) equal to majority(terms) under gate."""
    consts = [t for t in terms if isinstance(t, bool)]
    vars_ = [t for t in terms if not isinstance(t, bool)]
    true_c = sum(1 for c in consts if c)
    false_c = len(consts) - true_c
    if true_c >= 2:
        return True
    if false_c >= 2:
        return False
    if true_c == 1 and false_c == 1:
        return vars_[0]
    m = b.var()
    if true_c == 1:  # majority(a, b, True) = a or b
        x, y = vars_
        b.clause([-x, m], gate)
        b.clause([-y, m], gate)
        b.clause([x, y, -m], gate)
    elif false_c == 1:  # majority(a, b, False) = a and b
        x, y = vars_
        b.clause([-m, x], gate)
        b.clause([-m, y], gate)
        b.clause([-x, -y, m], gate)
    else:
        x, y, z = vars_
        b.clause([-x, -y, m], gate)
        b.clause([-x, -z, m], gate)
        b.clause([-y, -z, m], gate)
        b.clause([x, y, -m], gate)
        b.clause([x, z, -m], gate)
        b.clause([y, z, -m], gate)
    return m


def _gated_sum(
    b: _Builder,
    gate: int | None,
    out: list[int],
    xs: list[Bit],
    ys: list[Bit] | None = None,
    neg_x: bool = False,
    neg_y: bool = False,
) -> None:
    """Emit out == (+-xs) + (+-ys) in two's complement under ``gate``.

    At most one operand may be negated (handled as invert-and-carry-in);
    callers never need double negation.
    """
    width = len(out)
    xs = _fit(list(xs), width)
    ys = _fit(list(ys), width) if ys is not None else [False] * width
    carry: Bit = False
    if neg_x and neg_y:
        raise CapacityError("double negation not supported")
    if neg_x:
        xs = [_neg(x) for x in xs]
        carry = True
    if neg_y:
        ys = [_neg(y) for y in ys]
        carry = True
    for t in range(width):
        _xor_equal(b, gate, out[t], [xs[t], ys[t], carry])
        if t + 1 < width:
            carry = _majority(b, gate, [xs[t], ys[t], carry])


def _int_bits(value: int, width: int) -> list[bool]:
    if not -(1 << (width - 1)) <= value < (1 << (width - 1)):
        raise CapacityError(f"{value} does not fit in {width} signed bits")
    return [bool((value >> t) & 1) for t in range(width)]


class _LayerMatrix:
    """Bit vectors for the two integer components of one partial product."""

    def __init__(self, dim: int, width: int):
        self.dim = dim
        self.width = width
        self.bits: list[list[dict[str, list[Bit]]]] = [
            [{"a": [], "b": []} for _ in range(dim)] for _ in range(dim)
        ]

    @classmethod
    def constants(cls, dim: int, entries: list[list[tuple[int, int]]], width: int):
        m = cls(dim, width)
        for r in range(dim):
            for c in range(dim):
                a, bb = entries[r][c]
                m.bits[r][c]["a"] = _int_bits(a, width)
                m.bits[r][c]["b"] = _int_bits(bb, width)
        return m

    @classmethod
    def fresh(cls, b: _Builder, dim: int, width: int):
        m = cls(dim, width)
        for r in range(dim):
            for c in range(dim):
                m.bits[r][c]["a"] = [b.var() for _ in range(width)]
                m.bits[r][c]["b"] = [b.var() for _ in range(width)]
        return m


def _structural_clauses(
    b: _Builder,
    selectors: dict,
    gens: tuple[GeneratorId, ...],
    layer: int,
    parallel: bool,
) -> None:
    layer_vars = [selectors[(layer, j)] for j in range(len(gens))]
    b.clause(layer_vars)  # every layer applies at least one gate
    if parallel:
        n_qubits = max(q for g in gens for q in g.qubits())
        for q in range(1, n_qubits + 1):
            touching = [j for j, g in enumerate(gens) if q in g.qubits()]
            for a in range(len(touching)):
                for c in range(a + 1, len(touching)):
                    b.clause([-layer_vars[touching[a]], -layer_vars[touching[c]]])
    else:
        for a in range(len(gens)):
            for c in range(a + 1, len(gens)):
                b.clause([-layer_vars[a], -layer_vars[c]])


def _emit_layer_transition(
    b: _Builder,
    gens: tuple[GeneratorId, ...],
    selectors: dict,
    layer: int,
    prev: _LayerMatrix,
    cur: _LayerMatrix,
) -> None:
    dim = prev.dim
    touching: dict[int, list[int]] = {r: [] for r in range(dim)}
    for j, g in enumerate(gens):
        p = g.plane()
        touching[p].append(j)
        touching[p + 1].append(j)

    for j, g in enumerate(gens):
        x = selectors[(layer, j)]
        p = g.plane()
        for c in range(dim):
            top, bot = prev.bits[p][c], prev.bits[p + 1][c]
            out_top, out_bot = cur.bits[p][c], cur.bits[p + 1][c]
            if g.kind in (GateKind.T, GateKind.TINV):
                flip = g.kind is GateKind.TINV
                for comp in ("a", "b"):
                    # T: top' = top + bot, bot' = bot - top; transpose flips
                    _gated_sum(b, x, out_top[comp], top[comp], bot[comp], neg_y=flip)
                    _gated_sum(b, x, out_bot[comp], bot[comp], top[comp], neg_y=not flip)
            else:
                flip = g.kind in (GateKind.SINV, GateKind.RINV)
                # signed transposition times sqrt(2):
                #   top' = (+-) sqrt(2) * bot, bot' = (-+) sqrt(2) * top
                _gated_sum(b, x, out_top["a"], _double(bot["b"]), neg_x=flip)
                _gated_sum(b, x, out_top["b"], bot["a"], neg_x=flip)
                _gated_sum(b, x, out_bot["a"], _double(top["b"]), neg_x=not flip)
                _gated_sum(b, x, out_bot["b"], top["a"], neg_x=not flip)

    for r in range(dim):
        idle = b.var()
        for j in touching[r]:
            b.clause([-idle, -selectors[(layer, j)]])
        b.clause([idle] + [selectors[(layer, j)] for j in touching[r]])
        for c in range(dim):
            _gated_sum(b, idle, cur.bits[r][c]["a"], _double(prev.bits[r][c]["b"]))
            _gated_sum(b, idle, cur.bits[r][c]["b"], prev.bits[r][c]["a"])


def _trivial(varmap: VarMap, kind: str) -> CnfInstance:
    varmap.trivial = kind
    if kind == "sat-empty":
        return CnfInstance(0, [], varmap)
    return CnfInstance(1, [(1,), (-1,)], varmap)


def encode(
    q: TransferMatrix,
    depth: int,
    parallel: bool = True,
    var_limit: int | None = None,
) -> CnfInstance:
    """CNF satisfiable iff a depth-``depth`` circuit realizes ``q`` exactly.

    Every layer must be non-empty; ``parallel`` admits disjoint-support
    gates per layer, otherwise exactly one gate per layer is enforced.
    Depths below k_max(q) are unsatisfiable by the scale bound and return a
    trivial instance without encoding.
    """
    if depth < 0:
        raise RangeError("depth must be non-negative")
    if not q.is_special_orthogonal():
        raise NotOrthogonalError("target is not exactly special orthogonal")
    gens = generator_order(q.n)
    varmap = VarMap(n=q.n, depth=depth, parallel=parallel, generators=gens, target=q)
    if depth < q.k_max():
        return _trivial(varmap, "unsat")
    if depth == 0:
        is_identity = q == TransferMatrix.identity(q.n)
        return _trivial(varmap, "sat-empty" if is_identity else "unsat")

    limit = DEFAULT_VAR_LIMIT if var_limit is None else var_limit
    dim = 2 * q.n
    est = depth * (len(gens) + dim * dim * 2 * layer_width(depth) * 2)
    if est > limit:
        raise CapacityError(f"estimated {est} variables exceeds the limit {limit}")

    b = _Builder()
    for i in range(1, depth + 1):
        for j in range(len(gens)):
            varmap.selectors[(i, j)] = b.var()
    for i in range(1, depth + 1):
        _structural_clauses(b, varmap.selectors, gens, i, parallel)

    identity = [[(1, 0) if r == c else (0, 0) for c in range(dim)] for r in range(dim)]
    prev = _LayerMatrix.constants(dim, identity, layer_width(0))
    for i in range(1, depth + 1):
        cur = _LayerMatrix.fresh(b, dim, layer_width(i))
        _emit_layer_transition(b, gens, varmap.selectors, i, prev, cur)
        prev = cur

    for r in range(dim):
        for c in range(dim):
            av, bv = q.rows[r][c]._upscaled(depth)
            for comp, val in (("a", av), ("b", bv)):
                for t, bit in enumerate(_int_bits(val, prev.width)):
                    lit = prev.bits[r][c][comp][t]
                    b.clause([lit if bit else -lit])

    varmap.aux_ranges["total"] = (1, b.num_vars)
    return CnfInstance(b.num_vars, b.clauses, varmap)


def encode_maxsat(
    q: TransferMatrix, depth: int, parallel: bool = True, var_limit: int | None = None
) -> WcnfInstance:
    """Hard clauses as :func:`encode`, soft unit negations of T selectors."""
    base = encode(q, depth, parallel, var_limit)
    soft = [(1, (-v,)) for v in base.t_selector_vars()]
    top = len(soft) + 1
    return WcnfInstance(base.num_vars, list(base.clauses), soft, top, base.varmap)


def encode_stateprep(
    gamma: TransferMatrix,
    depth: int,
    parallel: bool = True,
    var_limit: int | None = None,
) -> CnfInstance:
    """CNF satisfiable iff a depth-``depth`` circuit maps the vacuum
    covariance onto ``gamma``.

    Rather than matching all entries of the product, the linear commutation
    condition W * Gamma_0 = Gamma * W is bit-blasted; with W orthogonal by
    construction it is equivalent to Gamma = W Gamma_0 W^T.
    """
    from ..targets import vacuum_covariance

    n = gamma.n
    dim = 2 * n
    minus_gt = gamma.transpose()
    for i in range(dim):
        for j in range(dim):
            if gamma.rows[i][j] != -minus_gt.rows[i][j]:
                raise NotCovarianceError("gamma is not antisymmetric")
    gsq = gamma.matmul(gamma)
    ident = TransferMatrix.identity(n)
    for i in range(dim):
        for j in range(dim):
            want = RingScalar(-1, 0, 0) if i == j else RingScalar(0, 0, 0)
            if gsq.rows[i][j] != want:
                raise NotCovarianceError("gamma^2 is not -identity")
    gens = generator_order(n)
    varmap = VarMap(
        n=n,
        depth=depth,
        parallel=parallel,
        generators=gens,
        mode="stateprep",
        target=gamma,
        gamma0=vacuum_covariance(n),
    )
    g = gamma.k_max()
    if g > 2 * depth:
        return _trivial(varmap, "unsat")
    if depth == 0:
        ok = gamma == varmap.gamma0
        return _trivial(varmap, "sat-empty" if ok else "unsat")

    b = _Builder()
    for i in range(1, depth + 1):
        for j in range(len(gens)):
            varmap.selectors[(i, j)] = b.var()
    for i in range(1, depth + 1):
        _structural_clauses(b, varmap.selectors, gens, i, parallel)

    identity = [[(1, 0) if r == c else (0, 0) for c in range(dim)] for r in range(dim)]
    prev = _LayerMatrix.constants(dim, identity, layer_width(0))
    for i in range(1, depth + 1):
        cur = _LayerMatrix.fresh(b, dim, layer_width(i))
        _emit_layer_transition(b, gens, varmap.selectors, i, prev, cur)
        prev = cur

    # Bit widths for the accumulated comparison W Gamma_0 vs Gamma W: entries
    # of both sides are bounded by 1 in value, scaled by sqrt(2)**(depth+g);
    # partial sums over 2n terms add a few magnitude bits.
    acc_width = (depth + g + 1) // 2 + 3 + max(1, (2 * n - 1).bit_length())
    gamma_scaled = [[gamma.rows[i][j]._upscaled(g) for j in range(dim)] for i in range(dim)]

    def scaled_w_bits(r: int, c: int, comp: str) -> list[Bit]:
        # sqrt(2)**g * W entry components via g upscale steps a,b -> 2b,a
        a_bits = prev.bits[r][c]["a"]
        b_bits = prev.bits[r][c]["b"]
        for _ in range(g):
            a_bits, b_bits = _double(b_bits), a_bits
        return a_bits if comp == "a" else b_bits

    for r in range(dim):
        for c in range(dim):
            # LHS: sqrt(2)**g * (W Gamma_0): columns of Gamma_0 pick +-W cols,
            # (W G0)[:, 2k] = -W[:, 2k+1] and (W G0)[:, 2k+1] = W[:, 2k].
            col = c + 1 if c % 2 == 0 else c - 1
            lhs_negated = c % 2 == 0
            for comp in ("a", "b"):
                lhs = _fit(scaled_w_bits(r, col, comp), acc_width)
                if lhs_negated:
                    neg = [b.var() for _ in range(acc_width)]
                    _gated_sum(b, None, neg, lhs, neg_x=True)
                    lhs = neg
                # RHS: (P + R sqrt2)(A + B sqrt2) row r of gamma times col c of W
                acc: list[Bit] | None = None
                for k in range(dim):
                    pa, rb = gamma_scaled[r][k]
                    wa = prev.bits[k][c]["a"]
                    wb = prev.bits[k][c]["b"]
                    if comp == "a":
                        terms = [(pa, wa), (2 * rb, wb)]
                    else:
                        terms = [(pa, wb), (rb, wa)]
                    for coeff, bits in terms:
                        if coeff == 0:
                            continue
                        contrib = _const_mult(b, coeff, bits, acc_width)
                        if acc is None:
                            acc = contrib
                        else:
                            nxt = [b.var() for _ in range(acc_width)]
                            _gated_sum(b, None, nxt, acc, contrib)
                            acc = nxt
                if acc is None:
                    acc = [False] * acc_width
                _vec_equal(b, lhs, acc)
    varmap.aux_ranges["total"] = (1, b.num_vars)
    return CnfInstance(b.num_vars, b.clauses, varmap)


def _const_mult(b: _Builder, coeff: int, bits: list[Bit], width: int) -> list[Bit]:
    """coeff * bits as a (possibly fresh) bit vector at ``width``."""
    neg = coeff < 0
    mag = -coeff if neg else coeff
    shifted: list[list[Bit]] = []
    t = 0
    while mag:
        if mag & 1:
            shifted.append([False] * t + list(bits))
        mag >>= 1
        t += 1
    if not shifted:
        return [False] * width
    acc = _fit(shifted[0], width)
    for extra in shifted[1:]:
        nxt = [b.var() for _ in range(width)]
        _gated_sum(b, None, nxt, acc, _fit(extra, width))
        acc = nxt
    if neg:
        nxt = [b.var() for _ in range(width)]
        _gated_sum(b, None, nxt, acc, neg_x=True)
        acc = nxt
    return acc
