"""
Command-line interface: one subcommand per library capability.

Exit codes: 0 success, 1 domain error (invalid word, certification
failure, failed suite), 2 usage error. With ``--json`` exactly one JSON
document is written to standard output.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO

from app.algebra.classify import (
    arno_split,
    classify_word,
    dvr_add,
    dvr_classify,
    dvr_dual,
    dvr_is_injective,
    dvr_is_projective,
)
from app.algebra.ksdecomp import decompose
from app.algebra.modrep import (
    BandParam,
    ModuleRep,
    dual,
    hom_dim,
    is_isomorphic,
    materialize_band,
    materialize_string,
    radical_series,
    socle_series,
)
from app.algebra.strings import (
    PeriodicWord,
    canonical_band,
    canonical_form,
    inverse_band,
    inverse_word,
    parse_any,
    parse_band,
    parse_word,
    serialize_band,
    serialize_word,
    truncate_end,
    validate,
)
from app.config import CliConfig, get_config
from app.errors import MatlisError, UsageError
from app.models import decomposition_document, matrix_rows, module_to_document
from app.utils.dvr_text import format_dvr, parse_dvr
from app.utils.module_file import module_json, read_module, write_module

logger = logging.getLogger("app.cli")


@dataclass
class Outcome:
    """What a subcommand produced: a JSON payload, its pretty form and an exit code."""

    payload: dict
    text: str
    code: int = 0
    module: Optional[ModuleRep] = None


def _spell(word) -> str:
    return serialize_band(word) if isinstance(word, PeriodicWord) else serialize_word(word)


def _module_from(args, cfg: CliConfig, index: int = 0) -> ModuleRep:
    inputs = args.inputs or []
    if len(inputs) > index:
        return read_module(inputs[index])
    if index == 0 and getattr(args, "word", None):
        return materialize_string(parse_word(args.word), cfg.field_spec)
    raise UsageError(f"this command needs {index + 1} module file(s) given with --in")


# ── word commands ──────────────────────────────────────────────────────────

def cmd_validate(args, cfg: CliConfig) -> Outcome:
    report = validate(args.word)
    payload = {
        "ok": report.ok,
        "canonical": report.canonical,
        "error": report.error,
        "kind": report.kind,
        "position": report.position,
        "pair": list(report.pair) if report.pair else None,
    }
    text = f"ok: {report.canonical}" if report.ok else f"invalid: {report.error}"
    return Outcome(payload, text, 0 if report.ok else 1)


def cmd_classify(args, cfg: CliConfig) -> Outcome:
    w = parse_word(args.word)
    kind = classify_word(w)
    return Outcome({"word": serialize_word(w), "classification": kind.value}, kind.value)


def cmd_canon(args, cfg: CliConfig) -> Outcome:
    word = parse_any(args.word)
    canon = canonical_band(word) if isinstance(word, PeriodicWord) else canonical_form(word)
    return Outcome({"word": _spell(word), "canonical": _spell(canon)}, _spell(canon))


def cmd_dual(args, cfg: CliConfig) -> Outcome:
    if args.inputs:
        m = dual(read_module(args.inputs[0]))
        return Outcome(module_to_document(m).model_dump(mode="json"), module_json(m).rstrip(), module=m)
    if not args.word:
        raise UsageError("dual needs a word or a module file given with --in")
    word = parse_any(args.word)
    result = inverse_band(word) if isinstance(word, PeriodicWord) else inverse_word(word)
    return Outcome({"word": _spell(word), "dual": _spell(result)}, _spell(result))


def cmd_split(args, cfg: CliConfig) -> Outcome:
    w = parse_word(args.word)
    split = arno_split(w)
    payload = {
        "word": serialize_word(w),
        "sub": serialize_word(split.sub),
        "quot": serialize_word(split.quot),
        "split_index": split.split_index,
        "connector": split.connector.value if split.connector else None,
        "sub_classification": classify_word(split.sub).value,
        "quot_classification": classify_word(split.quot).value,
    }
    if split.is_trivial:
        text = f"trivial split: whole word is the {split.whole_side}"
    else:
        text = f"sub: {payload['sub']}\nquot: {payload['quot']}\ncut at letter {split.split_index}"
    return Outcome(payload, text)


def cmd_truncate(args, cfg: CliConfig) -> Outcome:
    if args.depth is None:
        raise UsageError("truncate needs --depth")
    w = truncate_end(parse_word(args.word), args.depth)
    return Outcome({"word": args.word, "depth": args.depth, "truncated": serialize_word(w)}, serialize_word(w))


# ── module commands ────────────────────────────────────────────────────────

def cmd_materialize(args, cfg: CliConfig) -> Outcome:
    m = materialize_string(parse_word(args.word), cfg.field_spec)
    return Outcome(module_to_document(m).model_dump(mode="json"), module_json(m).rstrip(), module=m)


def _parse_scalars(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def cmd_band(args, cfg: CliConfig) -> Outcome:
    text = args.word if args.word.startswith("band(") else f"band({args.word})"
    pw = parse_band(text)
    field = cfg.field_spec
    if args.poly:
        coeffs = [field.scalar(_fraction(c)) for c in _parse_scalars(args.poly)]
        param = BandParam.companion(coeffs, args.power)
    else:
        param = BandParam.jordan(field.scalar(_fraction(args.eigenvalue)), args.size)
    m = materialize_band(pw, param, field)
    return Outcome(module_to_document(m).model_dump(mode="json"), module_json(m).rstrip(), module=m)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text))
    except ValueError:
        raise UsageError(f"{text!r} is not a number") from None


def cmd_soc_series(args, cfg: CliConfig) -> Outcome:
    m = _module_from(args, cfg)
    soc, rad = socle_series(m), radical_series(m)
    return Outcome(
        {"dim": m.dim, "socle_series": soc, "radical_series": rad},
        f"socle series: {soc}\nradical series: {rad}",
    )


def cmd_hom_dim(args, cfg: CliConfig) -> Outcome:
    src, tgt = _module_from(args, cfg, 0), _module_from(args, cfg, 1)
    n = hom_dim(src, tgt)
    return Outcome({"hom_dim": n}, str(n))


def cmd_iso(args, cfg: CliConfig) -> Outcome:
    m1, m2 = _module_from(args, cfg, 0), _module_from(args, cfg, 1)
    result = is_isomorphic(m1, m2, seed=cfg.seed, budget=cfg.mc_budget)
    payload = {
        "isomorphic": result.isomorphic,
        "certain": result.certain,
        "failure_bound": result.failure_bound,
        "reason": result.reason,
        "witness": matrix_rows(result.witness) if result.witness is not None else None,
    }
    verdict = "isomorphic" if result else "not isomorphic"
    if not result.certain:
        verdict += f" (monte carlo, failure <= {result.failure_bound:.3g})"
    return Outcome(payload, f"{verdict}: {result.reason}")


def cmd_decompose(args, cfg: CliConfig) -> Outcome:
    m = _module_from(args, cfg)
    result = decompose(m, seed=cfg.seed, budget=cfg.mc_budget)
    doc = decomposition_document(result)
    lines = [f"dim {m.dim} = " + " + ".join(f"{p.multiplicity}x{p.module.dim}" for p in result.parts)]
    for i, part in enumerate(result.parts):
        lines.append(f"  part {i}: dim {part.module.dim}, multiplicity {part.multiplicity}, {part.certificate.describe()}")
    return Outcome(doc.model_dump(mode="json"), "\n".join(lines))


# ── catalog and suite ──────────────────────────────────────────────────────

def cmd_dvr(args, cfg: CliConfig) -> Outcome:
    objects = [parse_dvr(t) for t in args.objects]
    op = args.op
    if op == "add":
        if len(objects) != 2:
            raise UsageError("dvr add needs two objects")
        out = dvr_add(*objects)
        return Outcome({"result": format_dvr(out)}, format_dvr(out))
    if len(objects) != 1:
        raise UsageError(f"dvr {op} needs one object")
    o = objects[0]
    if op == "dual":
        out = dvr_dual(o)
        return Outcome({"result": format_dvr(out)}, format_dvr(out))
    if op == "classify":
        kind = dvr_classify(o)
        return Outcome({"classification": kind.value}, kind.value)
    if op == "projective":
        flag = dvr_is_projective(o)
        return Outcome({"projective": flag}, str(flag).lower())
    flag = dvr_is_injective(o)
    return Outcome({"injective": flag}, str(flag).lower())


def cmd_paper_suite(args, cfg: CliConfig) -> Outcome:
    from app.suite import run_suite

    results = run_suite(cfg.field_spec, quick=args.quick, seed=cfg.seed, budget=cfg.mc_budget, workers=args.workers)
    payload = {
        "passed": all(r.passed for r in results),
        "checks": [
            {"criterion": r.criterion, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
            for r in results
        ],
    }
    lines = [f"[{'PASS' if r.passed else 'FAIL'}] {r.criterion:2d} {r.name}: {r.detail} ({r.seconds:.1f}s)" for r in results]
    return Outcome(payload, "\n".join(lines), 0 if payload["passed"] else 1)


COMMANDS = {
    "validate": (cmd_validate, "check a word against the grammar and forbidden pairs"),
    "classify": (cmd_classify, "finite-length / artinian / noetherian / mixed-reflexive"),
    "canon": (cmd_canon, "canonical representative of a word or band"),
    "dual": (cmd_dual, "inverse word, or the dual of a module file"),
    "split": (cmd_split, "noetherian submodule with artinian quotient"),
    "truncate": (cmd_truncate, "replace tails by --depth letters"),
    "materialize": (cmd_materialize, "module file of a finite string"),
    "band": (cmd_band, "module file of a band module"),
    "soc-series": (cmd_soc_series, "socle and radical series"),
    "hom-dim": (cmd_hom_dim, "dimension of Hom between two module files"),
    "iso": (cmd_iso, "isomorphism test between two module files"),
    "decompose": (cmd_decompose, "Krull-Schmidt decomposition of a module file"),
    "dvr": (cmd_dvr, "complete DVR catalog operations"),
    "paper-suite": (cmd_paper_suite, "run the reproduction checks"),
}

WORD_OPTIONAL = {"dual", "soc-series", "hom-dim", "iso", "decompose"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="Q or a prime (default: $MATLIS_FIELD or 32003)")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized steps (default: $MATLIS_SEED or 0)")
    common.add_argument("--mc-budget", type=int, default=None, help="Monte Carlo rounds K (default: $MATLIS_MC_BUDGET or 20)")
    common.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
    common.add_argument("--in", dest="inputs", action="append", default=None, help="module file; repeat for two")
    common.add_argument("--out", default=None, help="write the resulting module (or document) to this path")
    common.add_argument("--depth", type=int, default=None, help="truncation depth")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="matlis-ks", description="Matlis duality and Krull-Schmidt for k[x,y]/(xy).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "dvr":
            p.add_argument("op", choices=["dual", "classify", "add", "projective", "injective"])
            p.add_argument("objects", nargs="+", help='e.g. "A^1 + E^2 + [1,3]"')
        elif name == "paper-suite":
            p.add_argument("--quick", action="store_true", help="reduced trial counts")
            p.add_argument("--workers", type=int, default=None, help="thread pool size")
        elif name in WORD_OPTIONAL:
            p.add_argument("word", nargs="?", default=None)
        else:
            p.add_argument("word")
        if name == "band":
            p.add_argument("--eigenvalue", default="1", help="Jordan eigenvalue (nonzero)")
            p.add_argument("--size", type=int, default=1, help="Jordan block size")
            p.add_argument("--poly", default=None, help="companion polynomial, constant term first: c0,c1,...,1")
            p.add_argument("--power", type=int, default=1, help="power of the companion polynomial")
    return parser


def _emit(outcome: Outcome, cfg: CliConfig, args, stdout: TextIO) -> None:
    if args.out:
        if outcome.module is not None:
            write_module(outcome.module, args.out)
        else:
            Path(args.out).write_text(json.dumps(outcome.payload, indent=2) + "\n", encoding="utf-8")
    if cfg.json_output:
        stdout.write(json.dumps(outcome.payload) + "\n")
    elif not (args.out and outcome.module is not None):
        stdout.write(outcome.text + "\n")


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=stderr,
    )
    json_mode = args.json
    try:
        cfg = get_config(args.field, args.seed, args.mc_budget, "json" if args.json else None)
        json_mode = cfg.json_output
        handler, _ = COMMANDS[args.command]
        logger.debug("running %s with %s", args.command, cfg)
        outcome = handler(args, cfg)
    except UsageError as exc:
        return _fail(exc, 2, json_mode, stdout, stderr)
    except MatlisError as exc:
        return _fail(exc, 1, json_mode, stdout, stderr)
    _emit(outcome, cfg, args, stdout)
    return outcome.code


def _fail(exc: Exception, code: int, json_mode: bool, stdout: TextIO, stderr: TextIO) -> int:
    stderr.write(f"error: {exc}\n")
    if json_mode:
        payload: dict[str, Any] = {"ok": False, "error": str(exc), "error_type": type(exc).__name__, "exit_code": code}
        stdout.write(json.dumps(payload) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
