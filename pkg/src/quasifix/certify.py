"""Finite-quotient certificates separating a word from 1 in a mapping torus.

Given an injective endomorphism phi of a free group and a nontrivial word w,
the search walks the projective matrix-tuple dynamics over growing finite
fields until it finds a periodic tuple h whose word value is nontrivial.
The data (prime, field degree, orbit, period) is enough to rebuild a
homomorphism onto a subgroup of the wreath product PGL2(F_{p^s}) wr C_n
sending the stable letter to the coordinate shift and killing nothing it
should not: the verifier re-derives every condition from scratch, trusting
nothing the search produced.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from . import __version__
from .freegroup import (
    DEFAULT_WORD_BUDGET,
    FreeEndo,
    Word,
    WordError,
    endo_is_injective,
    nonscalar_sanity_check,
    word_evaluate,
)
from .gf import DEFAULT_ORDER_CAP, FqField, field_create, is_prime
from .matrep import (
    DEFAULT_ORBIT_BUDGET,
    Mat2,
    MatTuple,
    ProjPoint,
    SingularMatrixError,
    find_periodic_orbit,
    pgl_dynamics_step,
    pi_w,
    random_projpoint,
)

FORMAT_VERSION = 1

MatData = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]
TupleData = tuple[MatData, ...]


class CertifyError(ValueError):
    """Bad search input: identity word or non-injective endomorphism."""


class CertificateFormatError(ValueError):
    """The certificate file is not syntactically well-formed."""


@dataclass(frozen=True)
class CertifyConfig:
    s_max: int = 6
    seeds_per_field: int = 64
    orbit_budget: int = DEFAULT_ORBIT_BUDGET
    seed: int = 0
    prime_floor: int = 2
    max_primes: int = 6
    max_period: int = 4096
    allow_noninjective: bool = False
    order_cap: int = DEFAULT_ORDER_CAP
    word_budget: int = DEFAULT_WORD_BUDGET


@dataclass(frozen=True)
class Certificate:
    """Serialized finite-quotient witness; plain data, no live field objects."""

    rank: int
    images: tuple[str, ...]
    word: str
    p: int
    s: int
    period: int
    trace: tuple[TupleData, ...]
    seed: int
    format_version: int = FORMAT_VERSION
    # head tuple as declared in the file when it differs from trace[0]
    declared_head: TupleData | None = None

    @property
    def h(self) -> TupleData:
        return self.trace[0]

    def to_dict(self) -> dict:
        def mat_lists(t: TupleData) -> list:
            return [[list(row) for row in m] for m in t]

        return {
            "format_version": self.format_version,
            "rank": self.rank,
            "images": list(self.images),
            "word": self.word,
            "p": self.p,
            "s": self.s,
            "period": self.period,
            "tuple": mat_lists(self.h),
            "trace": [mat_lists(t) for t in self.trace],
            "metadata": {"seed": self.seed, "generator": f"quasifix {__version__}"},
        }

    def to_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
                + "\n").encode("utf-8")


def _shape_error(msg: str) -> CertificateFormatError:
    return CertificateFormatError(f"malformed certificate: {msg}")


def _as_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _shape_error(f"{what} must be an integer")
    return value


def _as_mat(value, what: str) -> MatData:
    if not isinstance(value, list) or len(value) != 4:
        raise _shape_error(f"{what} must be a list of 4 entry rows")
    rows = []
    for row in value:
        if not isinstance(row, list) or not row:
            raise _shape_error(f"{what} entries must be nonempty coefficient lists")
        rows.append(tuple(_as_int(c, f"{what} coefficient") for c in row))
    return tuple(rows)  # type: ignore[return-value]


def certificate_from_dict(data: dict) -> Certificate:
    if not isinstance(data, dict):
        raise _shape_error("top level must be an object")
    for key in ("format_version", "rank", "images", "word", "p", "s",
                "period", "tuple", "trace", "metadata"):
        if key not in data:
            raise _shape_error(f"missing key {key!r}")
    images = data["images"]
    if not isinstance(images, list) or not all(isinstance(t, str) for t in images):
        raise _shape_error("images must be a list of strings")
    if not isinstance(data["word"], str):
        raise _shape_error("word must be a string")
    if not isinstance(data["trace"], list) or not data["trace"]:
        raise _shape_error("trace must be a nonempty list")
    trace = []
    for entry in data["trace"]:
        if not isinstance(entry, list):
            raise _shape_error("trace entries must be lists of matrices")
        trace.append(tuple(_as_mat(m, "trace matrix") for m in entry))
    if not isinstance(data["tuple"], list):
        raise _shape_error("tuple must be a list")
    head = tuple(_as_mat(m, "tuple matrix") for m in data["tuple"])
    metadata = data["metadata"]
    if not isinstance(metadata, dict):
        raise _shape_error("metadata must be an object")
    return Certificate(
        rank=_as_int(data["rank"], "rank"),
        images=tuple(images),
        word=data["word"],
        p=_as_int(data["p"], "p"),
        s=_as_int(data["s"], "s"),
        period=_as_int(data["period"], "period"),
        trace=tuple(trace),
        seed=_as_int(metadata.get("seed", 0), "metadata.seed"),
        format_version=_as_int(data["format_version"], "format_version"),
        declared_head=head if head != tuple(trace)[0] else None,
    )


def certificate_from_bytes(raw: bytes) -> Certificate:
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise _shape_error(f"not valid JSON: {exc}") from exc
    return certificate_from_dict(data)


def _tuple_data(point: ProjPoint) -> TupleData:
    return tuple(
        (m.a.coeffs, m.b.coeffs, m.c.coeffs, m.d.coeffs) for m in point.tuple.mats)


def _materialize(cert: Certificate, field: FqField) -> list[MatTuple]:
    tuples = []
    for entry in cert.trace:
        mats = []
        for mat in entry:
            entries = [field.element(row) for row in mat]
            mats.append(Mat2.from_entries(field, entries))
        tuples.append(MatTuple(tuple(mats)))
    return tuples


# ---------------------------------------------------------------------------
# prime selection

def admissible_primes(phi: FreeEndo, w: Word, floor: int = 2,
                      word_budget: int = DEFAULT_WORD_BUDGET):
    """Primes keeping the integer matrix of phi^(4k)(w) non-scalar mod p.

    The matrix is non-scalar over the integers, so only finitely many primes
    are excluded: the divisors of gcd of its off-diagonals and diagonal
    difference.
    """
    ok, mat = nonscalar_sanity_check(phi, w, 4 * phi.rank, word_budget)
    if not ok:
        raise CertifyError("integer matrix is scalar; word reduces to the identity "
                           "or the endomorphism is not injective")
    g = math.gcd(math.gcd(abs(mat.b), abs(mat.c)), abs(mat.a - mat.d))
    p = max(floor, 2)
    while True:
        if is_prime(p) and g % p != 0:
            yield p
        p += 1


def pick_prime(phi: FreeEndo, w: Word, floor: int = 2,
               word_budget: int = DEFAULT_WORD_BUDGET) -> int:
    """Least prime >= floor at which the lifted word value stays non-scalar."""
    return next(admissible_primes(phi, w, floor, word_budget))


# ---------------------------------------------------------------------------
# search

@dataclass(frozen=True)
class SearchOutcome:
    certificate: Certificate | None
    frontier: tuple[tuple[int, int, int], ...] = ()  # (p, s, seeds tried)
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.certificate is not None


def search_certificate(phi: FreeEndo, w: Word,
                       config: CertifyConfig = CertifyConfig()) -> SearchOutcome:
    """Escalating orbit search for a certificate; deterministic per config.

    Field degrees and seeds are explored in a fixed order, so the first
    success is reproducible; exhaustion of the budgets is inconclusive, not
    a refutation.
    """
    if w.is_identity():
        raise CertifyError("the identity word cannot be separated from itself")
    if w.rank != phi.rank:
        raise CertifyError(f"word rank {w.rank} differs from endomorphism rank {phi.rank}")
    if not config.allow_noninjective and not endo_is_injective(phi):
        raise CertifyError("endomorphism is not injective; pass the override "
                           "to search anyway")
    k = phi.rank
    frontier: list[tuple[int, int, int]] = []
    primes = admissible_primes(phi, w, config.prime_floor, config.word_budget)
    for _ in range(config.max_primes):
        p = next(primes)
        for s in range(1, config.s_max + 1):
            if p**s > config.order_cap:
                break
            field = field_create(p, s, config.order_cap)
            frontier.append((p, s, config.seeds_per_field))
            for seed_index in range(config.seeds_per_field):
                rng = random.Random(f"{config.seed}:{p}:{s}:{seed_index}")
                start = random_projpoint(field, k, rng)
                result = find_periodic_orbit(phi, start, config.orbit_budget)
                if not result.found or result.period > config.max_period:
                    continue
                trace_points = [result.point]
                for _ in range(result.period - 1):
                    trace_points.append(pgl_dynamics_step(phi, trace_points[-1]))
                for rotation in range(result.period):
                    candidate = trace_points[rotation]
                    if pi_w(w, candidate.tuple).is_scalar():
                        continue
                    rotated = trace_points[rotation:] + trace_points[:rotation]
                    cert = Certificate(
                        rank=k,
                        images=tuple(img.to_text() for img in phi.images),
                        word=w.to_text(),
                        p=p,
                        s=s,
                        period=result.period,
                        trace=tuple(_tuple_data(pt) for pt in rotated),
                        seed=config.seed,
                    )
                    verdict = verify_certificate(cert, order_cap=config.order_cap)
                    if not verdict.passed:
                        raise RuntimeError(
                            f"internal error: fresh certificate failed verification: "
                            f"{verdict.failures}")
                    return SearchOutcome(cert, tuple(frontier))
    return SearchOutcome(None, tuple(frontier), reason="budget exhausted")


# ---------------------------------------------------------------------------
# wreath-product quotient

@dataclass(frozen=True)
class _WreathElement:
    coords: tuple[Mat2, ...]
    shift: int


class WreathOps:
    """Group operations of PGL2(F) wr C_n, coordinates as normalized matrices."""

    def __init__(self, field: FqField, n: int):
        self.field = field
        self.n = n
        self.identity = _WreathElement((Mat2.identity(field),) * n, 0)

    def _rot(self, coords: tuple[Mat2, ...], a: int) -> tuple[Mat2, ...]:
        n = self.n
        return tuple(coords[(i + a) % n] for i in range(n))

    def mul(self, x: _WreathElement, y: _WreathElement) -> _WreathElement:
        shifted = self._rot(y.coords, x.shift)
        coords = tuple((xc * yc).normalized()
                       for xc, yc in zip(x.coords, shifted))
        return _WreathElement(coords, (x.shift + y.shift) % self.n)

    def inv(self, x: _WreathElement) -> _WreathElement:
        inverted = tuple(c.adj().normalized() for c in x.coords)
        return _WreathElement(self._rot(inverted, -x.shift % self.n),
                              (-x.shift) % self.n)

    def embed_row(self, row: tuple[Mat2, ...]) -> _WreathElement:
        return _WreathElement(row, 0)

    def shift_generator(self) -> _WreathElement:
        return _WreathElement(self.identity.coords, 1 % self.n)


@dataclass(frozen=True)
class WreathData:
    """Generator rows and relation checks of the wreath-product quotient."""

    period: int
    rows: tuple[tuple[Mat2, ...], ...]
    relations_hold: tuple[bool, ...]
    w_first_coordinate_nontrivial: bool

    @property
    def all_relations_hold(self) -> bool:
        return all(self.relations_hold)


def build_wreath(cert: Certificate) -> WreathData:
    """Extract the y_j rows from the orbit trace and check the quotient map.

    The assignment (stable letter -> shift, generator j -> its orbit row)
    extends to a homomorphism exactly when conjugating each row by the shift
    equals the row of its image word, computed coordinatewise.
    """
    try:
        phi = FreeEndo.parse(cert.images, cert.rank)
        w = Word.parse(cert.word, cert.rank)
        field = field_create(cert.p, cert.s)
        points = _materialize(cert, field)
    except (WordError, ValueError) as exc:
        raise CertifyError(f"inconsistent certificate: {exc}") from exc
    n = cert.period
    if len(points) != n:
        raise CertifyError("inconsistent certificate: trace length differs from period")
    ops = WreathOps(field, n)
    rows = tuple(tuple(points[i][j] for i in range(n)) for j in range(cert.rank))
    embedded = [ops.embed_row(row) for row in rows]
    c = ops.shift_generator()
    relations = []
    for j in range(cert.rank):
        conjugated = ops.mul(ops.mul(c, embedded[j]), ops.inv(c))
        image_row = word_evaluate(phi.images[j], embedded, ops.mul, ops.inv,
                                  ops.identity)
        relations.append(conjugated == image_row)
    w_value = word_evaluate(w, embedded, ops.mul, ops.inv, ops.identity)
    nontrivial = w_value.shift == 0 and w_value.coords[0] != Mat2.identity(field)
    return WreathData(n, rows, tuple(relations), nontrivial)


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    detail: str


@dataclass(frozen=True)
class CertVerdict:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "status": c.status, "detail": c.detail}
                           for c in self.checks]}


def _structure_problems(cert: Certificate, order_cap: int) -> list[str]:
    problems = []
    if cert.format_version != FORMAT_VERSION:
        problems.append(f"unsupported format_version {cert.format_version}")
    if cert.rank < 1:
        problems.append("rank must be >= 1")
    if len(cert.images) != cert.rank:
        problems.append(f"{len(cert.images)} images for rank {cert.rank}")
    if not is_prime(cert.p):
        problems.append(f"p = {cert.p} is not prime")
    if cert.s < 1:
        problems.append(f"field degree s = {cert.s} must be >= 1")
    elif is_prime(cert.p) and cert.p**cert.s > order_cap:
        problems.append(f"field order {cert.p}^{cert.s} exceeds cap {order_cap}")
    if cert.period < 1:
        problems.append(f"period {cert.period} must be >= 1")
    if len(cert.trace) != cert.period:
        problems.append(f"trace has {len(cert.trace)} entries but period is {cert.period}")
    if cert.declared_head is not None:
        problems.append("declared tuple differs from the first trace entry")
    try:
        phi = FreeEndo.parse(cert.images, cert.rank)
        w = Word.parse(cert.word, cert.rank)
        if w.is_identity():
            problems.append("certified word reduces to the identity")
        for text, parsed in zip(cert.images, phi.images):
            if parsed.to_text() != text:
                problems.append(f"image {text!r} is not freely reduced")
        if w.to_text() != cert.word.strip():
            problems.append(f"word {cert.word!r} is not freely reduced")
    except WordError as exc:
        problems.append(f"word syntax: {exc}")
    def first_shape_problem() -> str | None:
        for entry in cert.trace:
            if len(entry) != cert.rank:
                return "trace entry arity differs from rank"
            for mat in entry:
                for row in mat:
                    if len(row) != cert.s or any(not 0 <= c < cert.p for c in row):
                        return "matrix coefficients out of range for the field"
        return None

    shape_problem = first_shape_problem()
    if shape_problem:
        problems.append(shape_problem)
    return problems


def verify_certificate(cert: Certificate,
                       order_cap: int = DEFAULT_ORDER_CAP) -> CertVerdict:
    """Independent re-derivation of every certificate condition.

    Rebuilds the field from (p, s) alone, re-runs the orbit step by step,
    and reports one named result per condition; nothing produced by the
    search is trusted.
    """
    checks: list[CheckResult] = []

    problems = _structure_problems(cert, order_cap)
    if problems:
        checks.append(CheckResult("structure", "fail", "; ".join(problems)))
        for name in ("tuple_in_group", "condition_i", "condition_ii",
                     "condition_iii", "wreath_relations"):
            checks.append(CheckResult(name, "skipped", "structure check failed"))
        return CertVerdict(tuple(checks))
    checks.append(CheckResult("structure", "pass", "fields, words and shapes are coherent"))

    phi = FreeEndo.parse(cert.images, cert.rank)
    w = Word.parse(cert.word, cert.rank)
    field = field_create(cert.p, cert.s, order_cap)
    tuples = _materialize(cert, field)

    membership_problems = []
    for i, t in enumerate(tuples):
        for j, m in enumerate(t.mats):
            if m.det().is_zero():
                membership_problems.append(f"trace[{i}] matrix {j} is singular")
            elif m.normalized() != m:
                membership_problems.append(f"trace[{i}] matrix {j} is not scalar-canonical")
    if membership_problems:
        checks.append(CheckResult("tuple_in_group", "fail", "; ".join(membership_problems)))
        checks.append(CheckResult("condition_i", "pass",
                                  "free group: no relations, holds vacuously"))
        for name in ("condition_ii", "condition_iii", "wreath_relations"):
            checks.append(CheckResult(name, "skipped", "tuple is not in the group"))
        return CertVerdict(tuple(checks))
    checks.append(CheckResult("tuple_in_group", "pass",
                              "all matrices invertible and scalar-canonical"))

    checks.append(CheckResult("condition_i", "pass",
                              "free group: no relations, holds vacuously"))

    points = [ProjPoint(t) for t in tuples]
    n = cert.period
    orbit_problems = []
    for i in range(n):
        try:
            stepped = pgl_dynamics_step(phi, points[i])
        except SingularMatrixError as exc:
            orbit_problems.append(f"step from trace[{i}] left the group: {exc}")
            break
        if stepped != points[(i + 1) % n]:
            orbit_problems.append(f"step from trace[{i}] does not give trace[{(i + 1) % n}]")
    if len(set(points)) != n:
        orbit_problems.append("period is not minimal: trace entries repeat")
    if orbit_problems:
        checks.append(CheckResult("condition_ii", "fail", "; ".join(orbit_problems)))
    else:
        checks.append(CheckResult("condition_ii", "pass",
                                  f"orbit closes with minimal period {n}"))

    value = pi_w(w, tuples[0])
    if value.is_scalar():
        checks.append(CheckResult("condition_iii", "fail",
                                  "word value at the base tuple is scalar"))
    else:
        checks.append(CheckResult("condition_iii", "pass",
                                  "word value at the base tuple is non-scalar"))

    try:
        wreath = build_wreath(cert)
    except CertifyError as exc:
        checks.append(CheckResult("wreath_relations", "fail", str(exc)))
        return CertVerdict(tuple(checks))
    if wreath.all_relations_hold and wreath.w_first_coordinate_nontrivial:
        checks.append(CheckResult(
            "wreath_relations", "pass",
            "shift conjugation matches image rows; word image is nontrivial"))
    else:
        bad = [f"generator {j + 1}" for j, ok in enumerate(wreath.relations_hold) if not ok]
        detail = []
        if bad:
            detail.append("relations fail for " + ", ".join(bad))
        if not wreath.w_first_coordinate_nontrivial:
            detail.append("word image has trivial first coordinate")
        checks.append(CheckResult("wreath_relations", "fail", "; ".join(detail)))
    return CertVerdict(tuple(checks))
