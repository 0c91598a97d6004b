"""Worked examples as JSON records and the pipeline that re-derives every printed value.

Records live in ``corpus_data/`` (or the directory named by ``LEVELMAT_CORPUS_DIR``).
Entries are templates: ``{expr}`` is an exact arithmetic expression in the record
parameters and ``<NAME>`` expands to the parenthesised definition ``defs[NAME]``.
"""

from __future__ import annotations

import ast
import json
import operator
import os
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping, Sequence

from .claims import claims
from .errors import CertificationError, CharacteristicError, LevelmatError, PreconditionError, ResolutionShapeError
from .groebner import Limits, ideal_equal
from .latent import LatentData, validate_latent
from .level import (
    LevelMatrix,
    admissible_pattern,
    certify_level,
    embed_identity_level,
    height_over,
    minors_fixing_lower_block,
    random_candidate,
    random_form,
)
from .linalg import nullspace, solve
from .matrices import PolyMatrix, determinant, ideal_of_minors, signed_maximal_minors
from .resolution import (
    GradedComplex,
    build_resolution,
    buchsbaum_eisenbud_check,
    hilbert_numerator,
    proportionality,
    recover_level_matrix,
    resolve_3generated,
    verify_complex,
)
from .rim import build_K
from .ring import ANY_DEGREE, DEFAULT_MODULUS, Field, Polynomial, PolyRing, field_from_options, is_homogeneous

CORPUS_VERSION = 1
CORPUS_ENV = "LEVELMAT_CORPUS_DIR"
WORKED = "worked-examples"


# templates

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.FloorDiv: operator.floordiv,
    ast.Pow: operator.pow,
}
_BRACE = re.compile(r"\{([^{}]+)\}")
_MACRO = re.compile(r"<([A-Z][A-Z0-9_]*)>")


def evaluate_expr(expr: str, params: Mapping[str, int]) -> Fraction:
    """Exact value of an arithmetic expression over integer parameters."""

    def ev(node):
        match node:
            case ast.Expression(body=body):
                return ev(body)
            case ast.Constant(value=int() as v):
                return Fraction(v)
            case ast.Name(id=name) if name in params:
                return Fraction(params[name])
            case ast.BinOp(left=l, op=op, right=r) if type(op) in _OPS:
                return Fraction(_OPS[type(op)](ev(l), ev(r)))
            case ast.UnaryOp(op=ast.USub(), operand=o):
                return -ev(o)
            case ast.UnaryOp(op=ast.UAdd(), operand=o):
                return ev(o)
        raise PreconditionError(f"unsupported template expression {expr!r}")

    return ev(ast.parse(expr, mode="eval"))


def _fmt(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator) if value >= 0 else f"({value.numerator})"
    return f"({value.numerator}/{value.denominator})"


def render(template: str, params: Mapping[str, int], defs: Mapping[str, str] | None = None) -> str:
    defs = defs or {}
    text = template
    for _ in range(10):
        new = _MACRO.sub(lambda m: "(" + defs[m.group(1)] + ")", text)
        if new == text:
            break
        text = new
    return _BRACE.sub(lambda m: _fmt(evaluate_expr(m.group(1), params)), text)


def _int(value, params) -> int:
    if isinstance(value, int):
        return value
    v = evaluate_expr(value.strip().strip("{}"), params)
    if v.denominator != 1:
        raise PreconditionError(f"{value!r} is not an integer for {dict(params)}")
    return int(v)


def _ints(values, params) -> tuple[int, ...]:
    return tuple(_int(v, params) for v in values)


def _latent(spec: Mapping, params) -> LatentData:
    return LatentData.checked(
        _int(spec["d"], params), _int(spec["m"], params), _ints(spec["delta"], params), _ints(spec["epsilon"], params)
    )


def _shifts(spec, params) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(_ints(F, params))) for F in spec)


# records


@dataclass(frozen=True)
class ExampleRecord:
    name: str
    title: str
    anchor: str
    kind: str
    data: Mapping[str, Any]
    version: int = CORPUS_VERSION

    @property
    def params(self) -> Mapping[str, Mapping]:
        return self.data.get("params", {})

    def resolve_params(self, given: Mapping[str, int | None]) -> dict[str, int]:
        out = {}
        for key, spec in self.params.items():
            value = given.get(key)
            value = spec.get("default") if value is None else value
            if value < spec.get("min", value):
                raise PreconditionError(f"{self.name}: {key} must be >= {spec['min']}, got {value}")
            out[key] = value
        return out

    def render(self, template: str, params: Mapping[str, int]) -> str:
        return render(template, params, self.data.get("defs"))

    def matrix(self, ring: PolyRing, rows, params) -> PolyMatrix:
        return PolyMatrix(ring, [[ring.parse(self.render(e, params)) for e in row] for row in rows])

    def poly(self, ring: PolyRing, template: str, params) -> Polynomial:
        return ring.parse(self.render(template, params))


def corpus_dir() -> Path:
    env = os.environ.get(CORPUS_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("levelmat") / "corpus_data"))


def _freeze(obj):
    if isinstance(obj, dict):
        return MappingProxyType({k: _freeze(v) for k, v in obj.items()})
    if isinstance(obj, list):
        return tuple(_freeze(v) for v in obj)
    return obj


@cache
def _load(directory: str) -> dict[str, ExampleRecord]:
    records = {}
    for path in sorted(Path(directory).glob("*.json")):
        raw = json.loads(path.read_text())
        rec = ExampleRecord(raw["name"], raw.get("title", ""), raw.get("anchor", ""), raw["kind"], _freeze(raw))
        records[rec.name] = rec
    return records


def load_records() -> dict[str, ExampleRecord]:
    return _load(str(corpus_dir()))


def record_names() -> list[str]:
    return sorted(load_records())


def get_record(name: str) -> ExampleRecord:
    records = load_records()
    if name not in records:
        raise PreconditionError(f"unknown example {name!r}; known: {', '.join(sorted(records))}")
    return records[name]


# Jacobian ideals


@claims("jacobian-ideal")
def jacobian_ideal(f: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """(f_x, f_y, f_z) for a ternary form f whose degree is nonzero in the coefficient field."""
    ring = f.ring
    if ring.n != 3:
        raise PreconditionError(f"expected a form in three variables, got {ring.n}")
    deg = is_homogeneous(f)
    if deg is None or deg is ANY_DEGREE:
        raise PreconditionError("f must be a nonzero form")
    p = ring.field.p
    if p and deg % p == 0:
        raise CharacteristicError(f"characteristic {p} divides deg f = {deg}")
    return tuple(f.diff(v) for v in range(3))


def check_characteristic(constraints: Sequence[str], params: Mapping[str, int], fld: Field) -> None:
    for expr in constraints:
        value = evaluate_expr(expr, params)
        if value == 0 or (fld.p and value.numerator % fld.p == 0):
            raise CharacteristicError(f"{expr} = {value} must be nonzero in {fld!r}")


# linear algebra on polynomial coefficients


def _coefficient_system(columns: Sequence[Sequence[Polynomial]], target: Sequence[Polynomial] | None = None):
    """Rows and right-hand side of sum_k x_k columns[k] = target, one equation per (slot, monomial)."""
    index: dict = {}
    rows: list[dict] = []

    def row_of(key):
        if key not in index:
            index[key] = len(rows)
            rows.append({})
        return rows[index[key]]

    for k, vec in enumerate(columns):
        for slot, poly in enumerate(vec):
            for exp, c in poly.terms.items():
                row_of((slot, exp))[k] = c
    rhs_terms = {}
    for slot, poly in enumerate(target or ()):
        for exp, c in poly.terms.items():
            row_of((slot, exp))
            rhs_terms[index[(slot, exp)]] = c
    return rows, [rhs_terms.get(i, 0) for i in range(len(rows))]


# xyz-special


@claims("worked-examples")
def xyz_special_eta(d: int, ring: PolyRing | None = None, modulus: int = DEFAULT_MODULUS, limits: Limits | None = None):
    """Complete the printed upper block for f = xyz(x^d + x y^(d-1) + y z^(d-1)) to a level matrix.

    The lower row B and a 3x3 scalar matrix G are solved jointly from p(B) = G J; the
    solution space must be a line with G invertible.
    """
    rec = get_record("xyz-special")
    ring = ring or PolyRing("x y z")
    params = rec.resolve_params({"d": d})
    check_characteristic(rec.data["nonzero_mod_p"], params, ring.field)
    J = jacobian_ideal(rec.poly(ring, rec.data["form"], params))
    A = rec.matrix(ring, rec.data["construction"]["A"], params)
    latent = _latent(rec.data["latent"], params)
    m = latent.m
    unknowns = [(j, exp) for j in range(m) if latent.b_degree(0, j) > 0 for exp in ring.monomials(latent.b_degree(0, j))]
    columns = []
    for j, exp in unknowns:
        row = [ring.monomial(exp) if k == j else ring.zero for k in range(m)]
        columns.append(signed_maximal_minors(A.vstack(PolyMatrix(ring, [row])))[:3])
    for i in range(3):
        for k in range(3):
            columns.append([-J[k] if s == i else ring.zero for s in range(3)])
    rows, _ = _coefficient_system(columns)
    kernel = nullspace(ring.field, rows, len(columns))
    if len(kernel) != 1:
        raise CertificationError(f"expected a unique lower row up to scale, found a {len(kernel)}-dimensional family")
    vec = kernel[0]
    G = [vec[len(unknowns) + 3 * i : len(unknowns) + 3 * i + 3] for i in range(3)]
    scale = G[0][0] or next((c for r in G for c in r if c), 0)
    if not scale:
        raise CertificationError("the solution does not involve the partials")
    inv = ring.field.inv(scale)
    entries = [dict() for _ in range(m)]
    for (j, exp), c in zip(unknowns, vec):
        if c:
            entries[j][exp] = ring.field(c * inv)
    B = PolyMatrix(ring, [[Polynomial(ring, t) for t in entries]])
    Gm = PolyMatrix(ring, [[ring.constant(c * inv) for c in r] for r in G])
    if not determinant(Gm):
        raise CertificationError("the minors fixing B are not a basis change of the partials")
    eta = certify_level(latent, A, B, modulus=modulus, limits=limits)
    if not ideal_equal(list(minors_fixing_lower_block(eta)), list(J), limits):
        raise CertificationError("minors fixing B do not regenerate the Jacobian ideal")
    return eta


# arrangement of general forms


@dataclass(frozen=True)
class Arrangement:
    forms: tuple[Polynomial, ...]
    f: Polynomial
    latent: LatentData
    B: PolyMatrix
    seed: int

    @property
    def m(self) -> int:
        return self.latent.m

    def expected_shifts(self) -> tuple[tuple[int, ...], ...]:
        d, m = self.latent.d, self.m
        degs = [g.degree() for g in self.forms]
        return (
            (0,),
            (d, d, d),
            tuple(sorted([2 * d - 1] * (m - 3) + [2 * d] * 3)),
            tuple(sorted(2 * d + k - 1 for k in degs)),
        )


def arrangement(degrees: Sequence[int], seed: int = 0, ring: PolyRing | None = None) -> Arrangement:
    """f = f_1 ... f_(m-2) for dense pseudorandom forms, with lower block [B' | Jacobian matrix of the f_i]."""
    ring = ring or PolyRing("x y z", Field(DEFAULT_MODULUS))
    degrees = list(degrees)
    m = len(degrees) + 2
    if m < 6 or min(degrees) < 1:
        raise PreconditionError("need at least four forms of positive degree")
    rng = random.Random(seed)
    forms = tuple(random_form(ring, k, rng) for k in degrees)
    f = ring.one
    for g in forms:
        f = f * g
    d = sum(degrees) - 1
    delta = [d - 1] * (m - 3) + [d] * 3
    epsilon = [k if i < m - 5 else k - 1 for i, k in enumerate(degrees)]
    latent = LatentData.checked(d, m, delta, epsilon)
    rows = []
    for i, g in enumerate(forms):
        if i < m - 3:
            left = [-g if j == i else ring.zero for j in range(m - 3)]
        else:
            left = [g] * (m - 3)
        rows.append(left + [g.diff(v) for v in range(3)])
    return Arrangement(forms, f, latent, PolyMatrix(ring, rows), seed)


# reports


@dataclass(frozen=True)
class Check:
    name: str
    claim: str
    passed: bool
    detail: Any = None
    informational: bool = False

    def to_json(self) -> dict:
        out = {"check": self.name, "claim": self.claim, "pass": self.passed}
        if self.detail is not None:
            out["detail"] = self.detail
        if self.informational:
            out["informational"] = True
        return out


@dataclass
class ExampleReport:
    name: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    shifts: tuple | None = None
    level: LevelMatrix | None = None
    complex: GradedComplex | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed and not c.informational]

    def add(self, name: str, claim: str, passed: bool, detail=None, informational: bool = False) -> bool:
        self.checks.append(Check(name, claim, bool(passed), detail, informational))
        return bool(passed)

    def to_json(self) -> dict:
        return {
            "example": self.name,
            "params": self.params,
            "ok": self.ok,
            "shifts": [list(F) for F in self.shifts] if self.shifts else None,
            "checks": [c.to_json() for c in self.checks],
        }


def _sorted_shifts(modules) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(F)) for F in modules)


def _shift_detail(got, want) -> dict:
    return {"computed": [list(F) for F in got], "expected": [list(F) for F in want]}


def _unitwise_match(p: Sequence[Polynomial], J: Sequence[Polynomial]) -> list | None:
    """Scalars c_i and a permutation s with p_i = c_i J_s(i), or None."""
    used, out = set(), []
    for f in p:
        for k, g in enumerate(J):
            if k in used:
                continue
            c = proportionality([f], [g])
            if c:
                used.add(k)
                out.append((k, c))
                break
        else:
            return None
    return out


def _columns_up_to_unit(printed: PolyMatrix, computed: PolyMatrix, cols: Sequence[int]) -> dict:
    return {c + 1: proportionality(printed.col(c), computed.col(c)) is not None for c in cols}


def _psi_up_to_automorphism(printed, computed, F2, rng: random.Random) -> bool:
    """Exists an invertible graded T on F_2 with T psi_computed = psi_printed."""
    ring = computed[0].ring
    n = len(F2)
    blocks = []
    for a in range(n):
        unknowns = [(b, exp) for b in range(n) if F2[b] >= F2[a] for exp in ring.monomials(F2[b] - F2[a])]
        cols = [[ring.monomial(exp) * computed[b]] for b, exp in unknowns]
        rows, rhs = _coefficient_system(cols, [printed[a]])
        x0 = solve(ring.field, rows, rhs, len(unknowns))
        if x0 is None:
            return False
        blocks.append((unknowns, x0, nullspace(ring.field, rows, len(unknowns))))
    T = []
    for unknowns, x0, kernel in blocks:
        x = list(x0)
        for vec in kernel:
            c = ring.field.random_element(rng) if ring.field.p else rng.randint(-9, 9)
            x = [ring.field(a + c * b) for a, b in zip(x, vec)]
        row = [ring.zero] * n
        for (b, exp), c in zip(unknowns, x):
            if c:
                row[b] = row[b] + ring.monomial(exp, c)
        T.append(row)
    det = determinant(PolyMatrix(ring, T))
    return bool(det) and det.is_constant()


# pipeline


def _resolution_checks(rep: ExampleReport, tag: str, cx: GradedComplex, modulus, limits, seed) -> bool:
    vc = verify_complex(cx)
    be = buchsbaum_eisenbud_check(cx, modulus=modulus, limits=limits, seed=seed)
    ok = rep.add(f"{tag}-verified", "level-resolution", vc["ok"], vc)
    ok &= rep.add(f"{tag}-acyclic", "acyclicity-criterion", be["acyclic"], {"ranks": be["ranks"], "diagnostics": be["diagnostics"]})
    N = hilbert_numerator(cx)
    ok &= rep.add(
        f"{tag}-hilbert",
        "hilbert-numerator",
        N.value_at_one == 0 and N.first_derivative_at_one == 0 and N.e >= 1,
        {"numerator": str(N), "e": int(N.e) if N.e == int(N.e) else str(N.e)},
    )
    return ok


def _ring_for(fieldname: str, modulus: int) -> PolyRing:
    return PolyRing("x y z", field_from_options(fieldname, modulus))


def _build_level(rec: ExampleRecord, ring, params, latent, rep, modulus, limits) -> LevelMatrix | None:
    cons = rec.data["construction"]
    try:
        if cons["type"] == "explicit":
            A = rec.matrix(ring, cons["A"], params)
            B = rec.matrix(ring, cons["B"], params)
            eta = certify_level(latent, A, B, modulus=modulus, limits=limits, strict=False)
        elif cons["type"] == "embed":
            B = rec.matrix(ring, cons["B"], params)
            eta = embed_identity_level(B, latent, cons["u"], limits=limits, modulus=modulus)
        elif cons["type"] == "solve-lower-block":
            eta = xyz_special_eta(params["d"], ring=ring, modulus=modulus, limits=limits)
        else:
            raise PreconditionError(f"unknown construction {cons['type']!r}")
    except CertificationError as exc:
        rep.add("level-certified", "determinantal-heights", False, {"error": str(exc), **exc.report})
        return None
    rep.add("level-certified", "determinantal-heights", eta.certified, eta.certification.to_json())
    return eta if eta.certified else None


def _jacobian_pipeline(rec, rep, ring, params, f, eta, expected, modulus, limits, seed):
    J = jacobian_ideal(f)
    x, y, z = ring.gens()
    deg = f.degree()
    rep.add("euler-relation", "jacobian-ideal", x * J[0] + y * J[1] + z * J[2] == f.scale(deg))
    data = rec.data
    if "printed_partials" in data:
        printed = [rec.poly(ring, t, params) for t in data["printed_partials"]]
        match = [proportionality([a], [b]) is not None for a, b in zip(printed, J)]
        rep.add("printed-partials", WORKED, all(match), {"per_partial": match})
        if "printed_form" in data:
            lit = jacobian_ideal(rec.poly(ring, data["printed_form"], params))
            agree = [proportionality([a], [b]) is not None for a, b in zip(printed, lit)]
            rep.add("printed-form-vs-printed-partials", WORKED, all(agree), {"per_partial": agree}, informational=True)
    if eta is not None:
        p = list(minors_fixing_lower_block(eta))
        rep.add("minors-regenerate", "fixed-block-minors", ideal_equal(p, list(J), limits))
        if data.get("minors_vs_partials") == "unit-permutation":
            match = _unitwise_match(p, J)
            rep.add("minors-vs-partials-unitwise", "fixed-block-minors", match is not None,
                    None if match is None else [{"partial": k + 1, "unit": str(c)} for k, c in match])
        if "printed_latent" in data:
            printed_latent = {k: (_int(v, params) if k in ("d", "m") else list(_ints(v, params)))
                              for k, v in data["printed_latent"].items()}
            rep.add("printed-latent", WORKED, printed_latent == eta.latent.to_json(),
                    {"computed": eta.latent.to_json(), "printed": printed_latent})
        cx_level = build_resolution(eta)
        _resolution_checks(rep, "level-resolution", cx_level, modulus, limits, seed)
        back = LevelMatrix.from_json(json.loads(json.dumps(eta.to_json())), ring)
        rep.add("level-json-round-trip", "level-degree-shape", back.A == eta.A and back.B == eta.B and back.latent == eta.latent)
        rep.level = eta
    try:
        cx = resolve_3generated(list(J), limits)
    except ResolutionShapeError as exc:
        rep.add("resolution-from-scratch", "level-recovery", False, {"error": str(exc)})
        return
    rep.complex = cx
    got = _sorted_shifts(cx.modules)
    rep.shifts = got
    _resolution_checks(rep, "scratch-resolution", cx, modulus, limits, seed)
    if eta is not None:
        want = _sorted_shifts(eta.latent.resolution_shifts())
        rep.add("shifts-level-vs-scratch", "level-resolution", got == want, _shift_detail(got, want))
    if expected is not None:
        rep.add("printed-shifts", WORKED, got == expected, _shift_detail(got, expected))
    try:
        rec_eta = recover_level_matrix(cx, list(J), limits, modulus=modulus)
        rep.add("recover-level", "level-recovery", rec_eta.certified, rec_eta.certification.to_json())
    except LevelmatError as exc:
        rep.add("recover-level", "level-recovery", False, {"error": str(exc)})
    if "printed_psi" in data:
        printed = [rec.poly(ring, t, params) for t in data["printed_psi"]]
        computed = list(cx.maps[2].matrix.col(0))
        rep.add("printed-psi-up-to-automorphism", WORKED,
                _psi_up_to_automorphism(printed, computed, cx.modules[2], random.Random(seed)))
    if "printed_K_columns" in data and eta is not None:
        spec = data["printed_K_columns"]
        printed_K = rec.matrix(ring, spec["rows"], params)
        K = build_K(eta.B).K
        upper_p, upper_c = printed_K.submatrix(range(3), range(K.cols)), K.submatrix(range(3), range(K.cols))
        cols = [c - 1 for c in spec["columns"]]
        good = _columns_up_to_unit(upper_p, upper_c, cols)
        rep.add("printed-K-columns", WORKED, all(good.values()), good)
        gens = PolyMatrix(ring, [list(p)])
        syz = {c + 1: (gens @ upper_p.submatrix(range(3), [c])).is_zero() for c in range(K.cols)}
        rep.add("printed-K-columns-are-syzygies", WORKED, all(syz.values()), syz, informational=True)
        rep.add("printed-K-skew", WORKED, (printed_K + printed_K.T).is_zero(), informational=True)


def _run_jacobian(rec, params, ring, modulus, limits, seed) -> ExampleReport:
    rep = ExampleReport(rec.name, dict(params))
    check_characteristic(rec.data.get("nonzero_mod_p", ()), params, ring.field)
    f = rec.poly(ring, rec.data["form"], params)
    latent = _latent(rec.data["latent"], params)
    eta = _build_level(rec, ring, params, latent, rep, modulus, limits)
    expected = _shifts(rec.data["printed_shifts"], params)
    _jacobian_pipeline(rec, rep, ring, params, f, eta, expected, modulus, limits, seed)
    return rep


def _run_arrangement(rec, params, seed, modulus, limits) -> ExampleReport:
    ring = PolyRing("x y z", Field(modulus))
    seeds = [seed] if seed is not None else list(rec.data["seed_retries"])
    degrees = list(rec.data["degrees"])
    m = params.get("m", len(degrees) + 2)
    if m != len(degrees) + 2:
        degrees = [2] * (m - 2)
    attempts = []
    for s in seeds:
        arr = arrangement(degrees, s, ring)
        u = arr.m - 2
        Bp = arr.B.delete_cols([u - 1, u, u + 1])
        ht_Bp = height_over(ideal_of_minors(Bp, arr.m - 3), modulus, limits)
        ht_B = height_over(ideal_of_minors(arr.B, arr.m - 2), modulus, limits)
        attempts.append({"seed": s, "ht_B": ht_B, "ht_B_prime": ht_Bp})
        if ht_B >= 3 and ht_Bp >= 2:
            break
    else:
        rep = ExampleReport(rec.name, {**params, "m": m})
        rep.add("general-position-hypotheses", "identity-embedding", False, {"attempts": attempts})
        return rep
    rep = ExampleReport(rec.name, {**params, "m": m, "seed": arr.seed})
    rep.add("general-position-hypotheses", "identity-embedding", True, {"attempts": attempts})
    try:
        eta = embed_identity_level(arr.B, arr.latent, arr.m - 2, limits=limits, modulus=modulus)
        rep.add("level-certified", "determinantal-heights", eta.certified, eta.certification.to_json())
    except CertificationError as exc:
        rep.add("level-certified", "determinantal-heights", False, {"error": str(exc)})
        eta = None
    _jacobian_pipeline(rec, rep, ring, params, arr.f, eta, arr.expected_shifts(), modulus, limits, arr.seed or 0)
    return rep


def _run_latent(rec, ring, modulus, limits, seed) -> ExampleReport:
    rep = ExampleReport(rec.name, {})
    from .level import monomial_level

    for inst in rec.data["instances"]:
        latent = LatentData.checked(inst["d"], inst["m"], inst["delta"], inst["epsilon"])
        tag = f"[d={latent.d},m={latent.m},delta={list(latent.delta)},epsilon={list(latent.epsilon)}]"
        eta = monomial_level(latent, ring, modulus=modulus, limits=limits, strict=False)
        if not rep.add(f"level-certified{tag}", "monomial-level-matrix", eta.certified, eta.certification.to_json()):
            continue
        p = list(minors_fixing_lower_block(eta))
        if "expected_minors" in inst:
            want = [ring.parse(t) for t in inst["expected_minors"]]
            rep.add(f"expected-minors{tag}", "monomial-level-matrix", p == want, [str(f) for f in p])
        cx = build_resolution(eta)
        _resolution_checks(rep, f"level-resolution{tag}", cx, modulus, limits, seed)
        back = recover_level_matrix(cx, p, limits, modulus=modulus)
        rep.add(f"build-recover{tag}", "level-recovery",
                back.certified and ideal_equal(list(minors_fixing_lower_block(back)), p, limits))
        scratch = resolve_3generated(p, limits)
        got, want = _sorted_shifts(scratch.modules), _sorted_shifts(latent.resolution_shifts())
        rep.add(f"shifts-level-vs-scratch{tag}", "level-resolution", got == want, _shift_detail(got, want))
    return rep


def _run_obstruction(rec, ring, modulus, limits) -> ExampleReport:
    data = rec.data
    rep = ExampleReport(rec.name, {})
    lat = data["latent"]
    latent = validate_latent(lat["d"], lat["m"], lat["delta"], lat["epsilon"])
    if not rep.add("latent-valid", "latent-data", isinstance(latent, LatentData), latent.to_json()):
        return rep
    a_mask, b_mask = admissible_pattern(latent)
    zeros_A = sorted([i + 1, j + 1] for i, r in enumerate(a_mask) for j, ok in enumerate(r) if not ok)
    zeros_B = sorted([i + 1, j + 1] for i, r in enumerate(b_mask) for j, ok in enumerate(r) if not ok)
    want = data["zero_entries"]
    rep.add("forced-zero-pattern", "level-degree-shape",
            zeros_A == sorted(map(list, want["A"])) and zeros_B == sorted(map(list, want["B"])),
            {"A": zeros_A, "B": zeros_B})
    fi, fj = (k - 1 for k in data["free_entry"])
    divisible, heights = [], []
    for s in data["seeds"]:
        A, B = random_candidate(latent, ring, s)
        b = B[fi, fj]
        ok = bool(b)
        for q in signed_maximal_minors(A.vstack(B)):
            try:
                q.exact_div(b)
            except (ArithmeticError, ZeroDivisionError):
                ok = False
        divisible.append(ok)
        heights.append(certify_level(latent, A, B, modulus=modulus, limits=limits, strict=False).certification.ht_eta)
    rep.add("maximal-minors-in-principal-ideal", "level-degree-shape", all(divisible), {"seeds": list(data["seeds"])})
    rep.add("no-level-matrix", "determinantal-heights", all(h is not None and h <= 1 for h in heights),
            {"ht_eta": heights})
    shifts = _sorted_shifts(data["shifts"])
    rep.add("shifts-from-latent", "second-syzygy-shifts", _sorted_shifts(latent.resolution_shifts()) == shifts)
    N = hilbert_numerator(shifts)
    rep.add("vanishing-multiplicity", "hilbert-numerator",
            N.value_at_one == 0 and N.first_derivative_at_one == 0 and N.e == 0,
            {"numerator": str(N), "e": int(N.e)})
    rep.shifts = shifts
    return rep


@claims("worked-examples")
def run_example(
    name: str,
    d: int | None = None,
    *,
    m: int | None = None,
    seed: int | None = None,
    field: str = "fp",
    modulus: int = DEFAULT_MODULUS,
    limits: Limits | None = None,
) -> ExampleReport:
    """Rebuild a record from its inputs and compare every printed value; one check per comparison."""
    rec = get_record(name)
    params = rec.resolve_params({"d": d, "m": m})
    ring = _ring_for(field, modulus)
    if rec.kind == "jacobian" and rec.data["construction"]["type"] == "arrangement":
        return _run_arrangement(rec, params, seed, modulus, limits)
    if rec.kind == "jacobian":
        return _run_jacobian(rec, params, ring, modulus, limits, seed or 0)
    if rec.kind == "latent":
        return _run_latent(rec, ring, modulus, limits, seed or 0)
    if rec.kind == "obstruction":
        return _run_obstruction(rec, ring, modulus, limits)
    raise PreconditionError(f"unknown record kind {rec.kind!r}")


def corpus_lower_blocks(field: str = "fp", modulus: int = DEFAULT_MODULUS) -> list[tuple[str, PolyMatrix]]:
    """Every lower block B the corpus builds, at the default and one larger parameter."""
    from .level import monomial_level

    ring = _ring_for(field, modulus)
    out = []
    for rec in load_records().values():
        cons = rec.data.get("construction", {})
        if rec.kind == "jacobian" and cons.get("type") in ("explicit", "embed"):
            key, spec = next(iter(rec.params.items()), (None, None))
            values = [spec["default"], spec["default"] + 1] if spec else [None]
            for v in values:
                params = rec.resolve_params({key: v} if key else {})
                check_characteristic(rec.data.get("nonzero_mod_p", ()), params, ring.field)
                out.append((f"{rec.name}{params}", rec.matrix(ring, cons["B"], params)))
        elif cons.get("type") == "solve-lower-block":
            out.append((f"{rec.name}{{'d': 3}}", xyz_special_eta(3, ring=ring, modulus=modulus).B))
        elif cons.get("type") == "arrangement":
            arr = arrangement(rec.data["degrees"], rec.data["seed_retries"][0], PolyRing("x y z", Field(modulus)))
            out.append((f"{rec.name}{{'seed': {arr.seed}}}", arr.B))
        elif rec.kind == "latent":
            for inst in rec.data["instances"]:
                latent = LatentData.checked(inst["d"], inst["m"], inst["delta"], inst["epsilon"])
                eta = monomial_level(latent, ring, modulus=modulus, strict=False)
                out.append((f"{rec.name}{latent.to_json()}", eta.B))
    return sorted(out, key=lambda t: t[0])


def build_level(
    name: str,
    d: int | None = None,
    *,
    seed: int = 0,
    field: str = "fp",
    modulus: int = DEFAULT_MODULUS,
    limits: Limits | None = None,
) -> LevelMatrix:
    """The certified level matrix a Jacobian record constructs, without the rest of the pipeline."""
    rec = get_record(name)
    if rec.kind != "jacobian":
        raise PreconditionError(f"{name} does not construct a single level matrix")
    params = rec.resolve_params({"d": d})
    rep = ExampleReport(name, params)
    if rec.data["construction"]["type"] == "arrangement":
        arr = arrangement(rec.data["degrees"], seed, PolyRing("x y z", Field(modulus)))
        return embed_identity_level(arr.B, arr.latent, arr.m - 2, limits=limits, modulus=modulus)
    ring = _ring_for(field, modulus)
    check_characteristic(rec.data.get("nonzero_mod_p", ()), params, ring.field)
    eta = _build_level(rec, ring, params, _latent(rec.data["latent"], params), rep, modulus, limits)
    if eta is None:
        raise CertificationError(f"{name}{params} is not level", {"checks": [c.to_json() for c in rep.checks]})
    return eta


def jacobian_of(name: str, d: int | None = None, *, seed: int = 0, field: str = "fp", modulus: int = DEFAULT_MODULUS):
    """The three partials of the form a Jacobian record names."""
    rec = get_record(name)
    params = rec.resolve_params({"d": d})
    if rec.data["construction"]["type"] == "arrangement":
        return jacobian_ideal(arrangement(rec.data["degrees"], seed, PolyRing("x y z", Field(modulus))).f)
    ring = _ring_for(field, modulus)
    check_characteristic(rec.data.get("nonzero_mod_p", ()), params, ring.field)
    return jacobian_ideal(rec.poly(ring, rec.data["form"], params))
