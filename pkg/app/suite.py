"""
Reproduction suite: the structural results checked at desk scale.

Each check is a plain function returning a ``CheckResult``; trial counts are
parameters so the test-suite and ``paper-suite --quick`` can run the same
code with smaller numbers.
"""
import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from app.algebra.classify import (
    QUOT_SIDE,
    SUB_SIDE,
    Classification,
    DvrCatalogObject,
    admissible_cuts,
    arno_split,
    c_word,
    classify_dual_compat,
    classify_word,
    dvr_classify,
    dvr_dual,
    rejoin,
    same_word,
    split_uniqueness_check,
    truncation_consistency,
)
from app.algebra.ksdecomp import DecompositionResult, decompose, endo_algebra, is_indecomposable, radical_of_endo
from app.algebra.linalg import FieldSpec, Matrix
from app.algebra.modrep import (
    BandParam,
    ModuleRep,
    band_dual_parameter,
    conjugate,
    direct_sum,
    double_dual_unit,
    dual,
    hom_dim,
    is_homomorphism,
    is_isomorphic,
    materialize_band,
    materialize_string,
    random_module,
    socle_layer,
    socle_series,
)
from app.algebra.strings import (
    Letter,
    PeriodicWord,
    StringWord,
    canonical_band,
    canonical_form,
    enumerate_tailed,
    enumerate_words,
    inverse_word,
    parse_band,
    validate,
)
from app.errors import MatlisError
from app.utils.dvr_text import format_dvr, parse_dvr

logger = logging.getLogger(__name__)

KS_PRIME = 32003


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _timed(criterion: int, name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except (MatlisError, AssertionError) as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    logger.info("criterion %d (%s): %s in %.1fs", criterion, name, "pass" if passed else "FAIL", seconds)
    return CheckResult(criterion, name, passed, detail, seconds)


# ── 1-4: finite length modules ─────────────────────────────────────────────

def check_string_duality(field: FieldSpec, max_letters: int = 8) -> tuple[bool, str]:
    count = 0
    for w in enumerate_words(max_letters):
        result = is_isomorphic(dual(materialize_string(w, field)), materialize_string(inverse_word(w), field))
        if not result or not result.witness.is_invertible():
            return False, f"dual of M({w}) is not M({inverse_word(w)})"
        count += 1
    return True, f"{count} words"


def check_double_dual(field: FieldSpec, max_letters: int = 8, random_count: int = 100, max_dim: int = 12, seed: int = 0) -> tuple[bool, str]:
    modules = [materialize_string(w, field) for w in enumerate_words(max_letters)]
    seeds = np.random.SeedSequence(seed).spawn(random_count)
    rng = np.random.default_rng(seed)
    modules += [random_module(field, int(rng.integers(1, max_dim + 1)), s) for s in seeds]
    for m in modules:
        unit = double_dual_unit(m)
        if not unit.is_invertible() or not is_homomorphism(unit, m, dual(dual(m))):
            return False, f"evaluation map fails on a module of dimension {m.dim}"
    return True, f"{len(modules)} modules"


def check_socle_filtration(field: FieldSpec, max_i: int = 6, seed: int = 0) -> tuple[bool, str]:
    for i in range(1, max_i + 1):
        m = materialize_string(c_word(i), field)
        expected = list(range(1, 2 * i + 2, 2))
        if socle_series(m) != expected:
            return False, f"socle series of C_{i} is {socle_series(m)}, expected {expected}"
        for j in range(1, i + 1):
            if not is_isomorphic(socle_layer(m, j), materialize_string(c_word(j - 1), field), seed=seed):
                return False, f"soc^{j} M(C_{i}) is not M(C_{j - 1})"
    return True, f"C_1 .. C_{max_i}"


def check_endo_truncation(field: FieldSpec, max_i: int = 6) -> tuple[bool, str]:
    for i in range(1, max_i + 1):
        m = materialize_string(c_word(i), field)
        if hom_dim(m, m) != 2 * i + 1:
            return False, f"dim End M(C_{i}) = {hom_dim(m, m)}, expected {2 * i + 1}"
        algebra = endo_algebra(m)
        if not algebra.is_commutative():
            return False, f"End M(C_{i}) is not commutative"
        rad = radical_of_endo(algebra)
        if algebra.dim - rad.cols != 1:
            return False, f"End M(C_{i}) has radical codimension {algebra.dim - rad.cols}"
    return True, f"C_1 .. C_{max_i}"


# ── 5: Krull-Schmidt ───────────────────────────────────────────────────────

def band_catalog(periods=(2, 4)) -> list[PeriodicWord]:
    """Canonical primitive periodic words of the given periods."""
    seen = {}
    for n in periods:
        for cycle in itertools.product(list(Letter), repeat=n):
            try:
                pw = canonical_band(PeriodicWord(cycle))
            except MatlisError:
                continue
            seen[pw.cycle] = pw
    return list(seen.values())


def string_catalog(max_vertices: int = 6) -> list[StringWord]:
    seen = {}
    for w in enumerate_words(max_vertices - 1):
        c = canonical_form(w)
        seen[c.core] = c
    return list(seen.values())


def random_indecomposable(field: FieldSpec, rng: np.random.Generator, strings, bands, max_size: int = 3) -> ModuleRep:
    if rng.random() < 0.5:
        return materialize_string(strings[int(rng.integers(len(strings)))], field)
    pw = bands[int(rng.integers(len(bands)))]
    lam = int(rng.integers(1, field.p))
    size = int(rng.integers(1, max_size + 1))
    return materialize_band(pw, BandParam.jordan(lam, size), field)


def matches_multiset(expected: list[ModuleRep], result: DecompositionResult, seed: int = 0) -> bool:
    remaining = list(expected)
    for part in result.parts:
        for _ in range(part.multiplicity):
            for k, m in enumerate(remaining):
                if is_isomorphic(m, part.module, seed=seed):
                    remaining.pop(k)
                    break
            else:
                return False
    return not remaining


def check_krull_schmidt(
    trials: int = 200, seed: int = 0, budget: int = 20, max_vertices: int = 6, periods=(2, 3, 4), max_size: int = 3
) -> tuple[bool, str]:
    field = FieldSpec.prime(KS_PRIME)
    strings, bands = string_catalog(max_vertices), band_catalog(periods)
    for trial, trial_seed in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rng = np.random.default_rng(trial_seed)
        expected = [random_indecomposable(field, rng, strings, bands, max_size) for _ in range(int(rng.integers(2, 5)))]
        total = direct_sum(*expected)
        m = conjugate(total, Matrix.random_invertible(field, total.dim, rng))
        result = decompose(m, seed=trial_seed, budget=budget)
        if not matches_multiset(expected, result):
            return False, f"trial {trial}: recovered {[(p.module.dim, p.multiplicity) for p in result.parts]}"
    return True, f"{trials} trials, 0 certification failures"


# ── 6-7: chain conditions and the split ────────────────────────────────────

def check_dual_classification(max_core: int = 6) -> tuple[bool, str]:
    count = 0
    for w in enumerate_tailed(max_core):
        report = classify_dual_compat(w)
        if not report.ok:
            return False, f"{w}: {report.classification.value} vs dual {report.dual_classification.value}"
        count += 1
    return True, f"{count} words"


def check_arno_split(field: FieldSpec, max_core: int = 6, materialized: int = 25, depths=range(2, 7)) -> tuple[bool, str]:
    mixed = [w for w in enumerate_tailed(max_core) if classify_word(w) is Classification.MIXED_REFLEXIVE]
    for w in mixed:
        split = arno_split(w)
        if classify_word(split.sub) not in SUB_SIDE or classify_word(split.quot) not in QUOT_SIDE:
            return False, f"{w}: pieces {split.sub} / {split.quot} have the wrong type"
        if not same_word(rejoin(split), w):
            return False, f"{w}: pieces do not re-concatenate"
        cuts = admissible_cuts(w)
        for other in cuts:
            if not split_uniqueness_check(w, split.split_index, other).ok:
                return False, f"{w}: cuts {split.split_index} and {other} differ by more than their distance"
    for w in mixed[:materialized]:
        for d in depths:
            if not truncation_consistency(w, d, field).ok:
                return False, f"{w}: truncation at depth {d} does not give the exact sequence"
    return True, f"{len(mixed)} mixed words"


# ── 8: band modules ────────────────────────────────────────────────────────

def check_bands(periods=(2, 4), sizes=(1, 2, 3), pairs: int = 10, seed: int = 0, budget: int = 20) -> tuple[bool, str]:
    field = FieldSpec.prime(KS_PRIME)
    rng = np.random.default_rng(seed)
    checked = 0
    for pw in band_catalog(periods):
        for size in sizes:
            m = materialize_band(pw, BandParam.jordan(int(rng.integers(1, field.p)), size), field)
            if m.dim != pw.period * size:
                return False, f"{pw}: dimension {m.dim}, expected {pw.period * size}"
            if not is_indecomposable(m, seed=seed, budget=budget):
                return False, f"{pw} with a Jordan block of size {size} split"
            checked += 1
    base = parse_band("band(xY)")
    for _ in range(pairs):
        lam, mu = (int(v) for v in rng.choice(np.arange(1, field.p), size=2, replace=False))
        result = is_isomorphic(
            materialize_band(base, BandParam.jordan(lam), field),
            materialize_band(base, BandParam.jordan(mu), field),
            seed=seed,
            budget=budget,
        )
        if result:
            return False, f"band(xY) with eigenvalues {lam} and {mu} came out isomorphic"
    report = band_dual_parameter(base, BandParam.jordan(2), field, seed=seed)
    return True, f"{checked} bands indecomposable, {pairs} pairs distinct, dual parameter {report.matches}"


# ── 9-10: DVR catalog and parser ───────────────────────────────────────────

def random_dvr(rng: np.random.Generator) -> DvrCatalogObject:
    a, b, c = (int(v) for v in rng.integers(0, 4, size=3))
    finite = tuple(int(v) for v in rng.integers(1, 7, size=int(rng.integers(0, 5))))
    return DvrCatalogObject(a, b, c, finite)


def check_dvr(count: int = 1000, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        o = random_dvr(rng)
        d = dvr_dual(o)
        if dvr_dual(d) != o or (d.a, d.c) != (o.c, o.a):
            return False, f"{format_dvr(o)}: dual is not an involution swapping A and E"
        if dvr_classify(d) is not dvr_classify(o).swap():
            return False, f"{format_dvr(o)}: classification does not swap"
        if parse_dvr(format_dvr(o)) != o:
            return False, f"{format_dvr(o)}: text form does not round-trip"
    return True, f"{count} objects"


_ORACLE_FORBIDDEN = {"xy", "yx", "XY", "YX", "xX", "Xx", "yY", "Yy"}


def oracle_valid(text: str) -> bool:
    """Adjacent-pair check written without the parser."""
    return all(text[i : i + 2] not in _ORACLE_FORBIDDEN for i in range(len(text) - 1))


def check_parser(max_len: int = 6, random_count: int = 10**5, seed: int = 0) -> tuple[bool, str]:
    exhaustive = 0
    for n in range(max_len + 1):
        for letters in itertools.product("xyXY", repeat=n):
            text = "".join(letters)
            if validate(text).ok != oracle_valid(text):
                return False, f"{text!r}: parser and oracle disagree"
            exhaustive += 1
    rng = np.random.default_rng(seed)
    for _ in range(random_count):
        raw = bytes(rng.integers(0, 256, size=int(rng.integers(0, 24))).tolist())
        report = validate(raw.decode("latin-1"))
        if not isinstance(report.ok, bool):
            return False, f"{raw!r}: no verdict"
    return True, f"{exhaustive} exhaustive, {random_count} random"


# ── runner ─────────────────────────────────────────────────────────────────

def suite_checks(field: FieldSpec, quick: bool = False, seed: int = 0, budget: int = 20) -> list[tuple[int, str, Callable]]:
    if quick:
        return [
            (1, "string duality", lambda: check_string_duality(field, 5)),
            (2, "double dual unit", lambda: check_double_dual(field, 4, 10, 8, seed)),
            (3, "socle filtration of E", lambda: check_socle_filtration(field, 3, seed)),
            (4, "endomorphism truncation", lambda: check_endo_truncation(field, 3)),
            (5, "Krull-Schmidt", lambda: check_krull_schmidt(5, seed, budget, 4, (2,), 1)),
            (6, "duality swaps chain conditions", lambda: check_dual_classification(3)),
            (7, "artinian-by-noetherian split", lambda: check_arno_split(field, 3, 3, range(2, 4))),
            (8, "band modules", lambda: check_bands((2,), (1, 2), 3, seed, budget)),
            (9, "DVR catalog", lambda: check_dvr(100, seed)),
            (10, "parser robustness", lambda: check_parser(4, 1000, seed)),
        ]
    return [
        (1, "string duality", lambda: check_string_duality(field)),
        (2, "double dual unit", lambda: check_double_dual(field, seed=seed)),
        (3, "socle filtration of E", lambda: check_socle_filtration(field, seed=seed)),
        (4, "endomorphism truncation", lambda: check_endo_truncation(field)),
        (5, "Krull-Schmidt", lambda: check_krull_schmidt(seed=seed, budget=budget)),
        (6, "duality swaps chain conditions", lambda: check_dual_classification()),
        (7, "artinian-by-noetherian split", lambda: check_arno_split(field)),
        (8, "band modules", lambda: check_bands(seed=seed, budget=budget)),
        (9, "DVR catalog", lambda: check_dvr(seed=seed)),
        (10, "parser robustness", lambda: check_parser(seed=seed)),
    ]


def run_suite(
    field: FieldSpec,
    quick: bool = False,
    seed: int = 0,
    budget: int = 20,
    workers: Optional[int] = None,
) -> list[CheckResult]:
    """Run every criterion; results come back in criterion order whatever the scheduling."""
    checks = suite_checks(field, quick, seed, budget)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _timed(*c), checks))
