"""Command-line front end.

Exit codes: 0 verified / holds / found, 1 checked and fails / not found,
2 input error.  Reports are canonical JSON on stdout.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .classical import (
    ClassicalConfig,
    bounds_table,
    coherence,
    welch_max_bound,
    welch_sum_lhs,
    welch_sum_rhs,
)
from .errors import (
    CertificateError,
    DimensionMismatch,
    InvalidArgs,
    NotUnitNorm,
    ScalarSyntaxError,
    WrongCount,
)
from .linalg import Config, DiagCertificate
from .scalar import INF, Scalar, format_scalar, format_valuation, parse_scalar, parse_valuation
from .search import GeneratorSet, SearchParams, classical_search, na_search
from .symtensor import sym_dim
from .welch import (
    WelchReport,
    ZaunerResult,
    check_general,
    check_higher_order,
    equiangular_check,
    zauner_check,
)


class InputError(Exception):
    """Anything that makes the input impossible to evaluate (exit code 2)."""


# --- config files ------------------------------------------------------------


@dataclass(frozen=True)
class ConfigFile:
    field: str
    dimension: int
    vectors: tuple[tuple[Any, ...], ...]
    certificate: Optional[DiagCertificate] = None

    def na_config(self) -> Config:
        return Config(self.vectors)

    def classical_config(self) -> ClassicalConfig:
        return ClassicalConfig(self.vectors, self.field)


def _locate(raw: str, token: str, column: int) -> str:
    """Best-effort ``line L, column C`` of a string token inside the raw file."""
    idx = raw.find(json.dumps(token))
    if idx < 0:
        return f"column {column}"
    idx += 1 + column - 1
    line = raw.count("\n", 0, idx) + 1
    col = idx - (raw.rfind("\n", 0, idx) + 1) + 1
    return f"line {line}, column {col}"


def _parse_na_entry(entry: Any, where: str, raw: str) -> Scalar:
    if isinstance(entry, bool) or not isinstance(entry, (str, int)):
        raise InputError(f"{where}: expected scalar text, got {entry!r}")
    if isinstance(entry, int):
        return Scalar(entry)
    try:
        return parse_scalar(entry)
    except ScalarSyntaxError as exc:
        raise InputError(f"{where} ({_locate(raw, entry, exc.column)}): {exc}") from None


def _parse_real_entry(entry: Any, field: str, where: str) -> complex:
    if isinstance(entry, bool):
        raise InputError(f"{where}: expected a number, got {entry!r}")
    if isinstance(entry, (int, float)):
        return complex(entry)
    if not isinstance(entry, str):
        raise InputError(f"{where}: expected a number, got {entry!r}")
    text = entry.replace(" ", "")
    try:
        value = complex(text.replace("i", "j")) if field == "c" else complex(float(text))
    except ValueError:
        raise InputError(f"{where}: cannot parse {entry!r} as a {'complex' if field == 'c' else 'real'} number") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InputError(f"{where}: non-finite entry")
    return value


def parse_config_text(raw: str) -> ConfigFile:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    field = data.get("field")
    if field not in ("na", "r", "c"):
        raise InputError(f"'field' must be one of na, r, c; got {field!r}")
    d = data.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError(f"'dimension' must be a positive integer; got {d!r}")
    rows = data.get("vectors")
    if not isinstance(rows, list) or not rows:
        raise InputError("'vectors' must be a nonempty list")
    vectors = []
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise InputError(f"vectors[{j}]: expected {d} entries, got {got}")
        if field == "na":
            vectors.append(tuple(_parse_na_entry(e, f"vectors[{j}][{i}]", raw) for i, e in enumerate(row)))
        else:
            vectors.append(tuple(_parse_real_entry(e, field, f"vectors[{j}][{i}]") for i, e in enumerate(row)))
    cert = None
    if "certificate" in data:
        if field != "na":
            raise InputError("certificates apply to na configs only")
        c = data["certificate"]
        if not isinstance(c, dict) or "P" not in c or "D" not in c:
            raise InputError("certificate must have keys P and D")
        P, D = c["P"], c["D"]
        if not isinstance(P, list) or not isinstance(D, list) or any(
            not isinstance(r, list) or len(r) != len(P) for r in P
        ) or len(D) != len(P):
            raise InputError("certificate P must be square with len(D) == len(P)")
        cert = DiagCertificate(
            tuple(tuple(_parse_na_entry(e, f"certificate.P[{r}][{i}]", raw) for i, e in enumerate(row))
                  for r, row in enumerate(P)),
            tuple(_parse_na_entry(e, f"certificate.D[{i}]", raw) for i, e in enumerate(D)),
        )
    return ConfigFile(field, d, tuple(vectors), cert)


def _format_real(x: float) -> str:
    return "%.17g" % x


def _format_entry(field: str, x: Any) -> str:
    if field == "na":
        return format_scalar(x)
    if field == "r":
        return _format_real(x.real)
    sign = "-" if math.copysign(1.0, x.imag) < 0 else "+"
    return f"{_format_real(x.real)}{sign}{_format_real(abs(x.imag))}i"


def serialize_config(cf: ConfigFile) -> str:
    data: dict[str, Any] = {
        "field": cf.field,
        "dimension": cf.dimension,
        "vectors": [[_format_entry(cf.field, x) for x in row] for row in cf.vectors],
    }
    if cf.certificate is not None:
        data["certificate"] = {
            "P": [[format_scalar(x) for x in row] for row in cf.certificate.P],
            "D": [format_scalar(x) for x in cf.certificate.D],
        }
    return canonical_json(data)


def load_config(path: str) -> tuple[ConfigFile, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        cf = parse_config_text(raw)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    return cf, raw


# --- canonical output -----------------------------------------------------------


def canonical_json(obj: Any, indent: int = 0) -> str:
    """JSON with caller-fixed key order and doubles printed to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {canonical_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(canonical_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + canonical_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps("inf" if obj > 0 else "-inf" if obj < 0 else "nan")
        s = _format_real(obj)
        return s if any(ch in s for ch in ".en") else s + ".0"
    return json.dumps(str(obj))


def _digest(data: str) -> str:
    return "sha256:" + hashlib.sha256(data.encode("utf-8")).hexdigest()


def welch_payload(r: WelchReport) -> dict[str, Any]:
    return {
        "m": r.m,
        "n": r.n,
        "d": r.d,
        "lhs_valuation": format_valuation(r.lhs_valuation),
        "rhs_valuation": format_valuation(r.rhs_valuation),
        "holds": r.holds,
        "tight": r.tight,
        "unit_norm": r.unit_norm,
        "diag_note": r.diag_note,
        "pair_valuations": [
            [j, k, format_valuation(v)] for (j, k), v in sorted(r.pair_valuations.items()) if j < k
        ],
    }


def zauner_payload(z: ZaunerResult) -> dict[str, Any]:
    return {
        "unit_norm": z.unit_norm,
        "diagonalizable": z.diagonalizable,
        "condition_iii": z.condition_iii,
        "satisfied": z.satisfied,
    }


def table_payload(t) -> dict[str, Any]:
    return {
        "n": t.n,
        "d": t.d,
        "field": t.field_tag,
        "gerzon": t.gerzon,
        "welch_max": {str(m): v for m, v in t.welch_max.items()},
        "welch_vacuous": {str(m): v for m, v in t.welch_vacuous.items()},
        "bukh_cox": t.bukh_cox,
        "orthoplex": t.orthoplex,
        "levenstein": t.levenstein,
        "exponential": t.exponential,
        "applicable": dict(t.applicable),
        "notes": dict(t.notes),
        "best_coherence_bound": t.best,
    }


def _emit(command: Sequence[str], digest: str, result: dict, verdict: str, out) -> None:
    report = {
        "command": " ".join(command),
        "input_digest": digest,
        "result": result,
        "verdict": verdict,
    }
    out.write(canonical_json(report) + "\n")


# --- subcommands -------------------------------------------------------------------


def _require_field(cf: ConfigFile, allowed: tuple[str, ...], path: str) -> None:
    if cf.field not in allowed:
        raise InputError(f"{path}: field {cf.field!r} not accepted here (need {'/'.join(allowed)})")


def cmd_verify_na(args, out) -> tuple[dict, str, int, str]:
    cf, raw = load_config(args.config)
    _require_field(cf, ("na",), args.config)
    m = args.order
    if m < 1:
        raise InputError("--order must be positive")
    cfg = cf.na_config()
    if cf.certificate is not None and len(cf.certificate.P) != sym_dim(cfg.d, m):
        raise InputError(
            f"certificate size {len(cf.certificate.P)} does not match the order-{m} operator "
            f"(size {sym_dim(cfg.d, m)})"
        )
    if args.general:
        rep = check_general(cfg, m, cf.certificate)
    else:
        try:
            rep = check_higher_order(cfg, m, cf.certificate)
        except NotUnitNorm as exc:
            raise InputError(f"{exc}") from None
    return welch_payload(rep), _digest(raw), 0 if rep.holds else 1, "holds" if rep.holds else "fails"


def cmd_zauner_na(args, out):
    cf, raw = load_config(args.config)
    _require_field(cf, ("na",), args.config)
    z = zauner_check(cf.na_config(), cf.certificate)
    return zauner_payload(z), _digest(raw), 0 if z.satisfied else 1, "satisfied" if z.satisfied else "not satisfied"


def cmd_equiangular_na(args, out):
    cf, raw = load_config(args.config)
    _require_field(cf, ("na",), args.config)
    a, gv = _parse_norm_gamma(args)
    ok = equiangular_check(cf.na_config(), a, gv)
    payload = {
        "norm": format_scalar(a),
        "gamma_valuation": format_valuation(gv),
        "gamma_zero": gv == INF,
        "equiangular": ok,
    }
    return payload, _digest(raw), 0 if ok else 1, "equiangular" if ok else "not equiangular"


def _parse_norm_gamma(args) -> tuple[Scalar, Any]:
    try:
        a = parse_scalar(args.norm)
    except ScalarSyntaxError as exc:
        raise InputError(f"--norm: {exc}") from None
    try:
        gv = parse_valuation(args.gamma_val)
    except ValueError:
        raise InputError(f"--gamma-val: expected an integer or 'inf', got {args.gamma_val!r}") from None
    return a, gv


def cmd_verify_classical(args, out):
    cf, raw = load_config(args.config)
    _require_field(cf, ("r", "c"), args.config)
    m = args.order
    if m < 1:
        raise InputError("--order must be positive")
    cfg = cf.classical_config()
    lhs = welch_sum_lhs(cfg, m)
    rhs = welch_sum_rhs(cfg.n, cfg.d, m)
    ok = lhs >= rhs - 1e-9
    payload: dict[str, Any] = {"n": cfg.n, "d": cfg.d, "m": m, "sum_lhs": lhs, "sum_rhs": rhs,
                               "sum_holds": ok}
    if cfg.n >= 2:
        coh = coherence(cfg)
        payload["coherence"] = coh
        if cfg.n > cfg.d:
            wm = welch_max_bound(cfg.n, cfg.d, m)
            max_ok = coh ** (2 * m) >= wm.value - 1e-9
            payload["max_power"] = coh ** (2 * m)
            payload["welch_max"] = wm.value
            payload["welch_vacuous"] = wm.vacuous
            payload["max_holds"] = max_ok
            ok = ok and max_ok
    return payload, _digest(raw), 0 if ok else 1, "holds" if ok else "fails"


def _orders(text: str) -> list[int]:
    try:
        orders = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--orders: expected comma-separated integers, got {text!r}") from None
    if not orders or any(m < 1 for m in orders):
        raise InputError("--orders must list positive integers")
    return orders


def cmd_bounds(args, out):
    try:
        table = bounds_table(args.n, args.d, args.field, _orders(args.orders))
    except InvalidArgs as exc:
        raise InputError(str(exc)) from None
    digest = _digest(canonical_json({"n": args.n, "d": args.d, "field": args.field, "orders": args.orders}))
    return table_payload(table), digest, 0, "computed"


def cmd_search_classical(args, out):
    try:
        params = SearchParams(
            d=args.d, n=args.n, trials=args.trials, steps=args.steps,
            initial_step=args.step_size, shrink=args.shrink, seed=args.seed,
        )
    except InvalidArgs as exc:
        raise InputError(str(exc)) from None
    res = classical_search(params, args.field, workers=args.workers)
    payload = {
        "n": args.n,
        "d": args.d,
        "field": args.field,
        "trials": params.trials,
        "steps": params.steps,
        "seed": params.seed,
        "coherence": res.coherence,
        "best_bound": res.best_bound,
        "gap": res.gap,
        "vectors": [[_format_entry(args.field, x) for x in row] for row in res.best.vectors],
    }
    digest = _digest(canonical_json({k: payload[k] for k in ("n", "d", "field", "trials", "steps", "seed")}))
    return payload, digest, 0, "found"


def _load_generators(path: str) -> tuple[GeneratorSet, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("generators")
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a nonempty list of scalars (or {{'generators': [...]}})")
    vals = [_parse_na_entry(e, f"{path}: generators[{i}]", raw) for i, e in enumerate(data)]
    try:
        return GeneratorSet(tuple(vals)), raw
    except InvalidArgs as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_search_na(args, out):
    gen, raw = _load_generators(args.gens)
    a, gv = _parse_norm_gamma(args)
    if args.d < 1 or args.nmax < 1:
        raise InputError("--d and --nmax must be positive")
    hits = na_search(args.d, args.nmax, gen, a, gv)
    found = []
    for h in hits:
        item: dict[str, Any] = {
            "n": h.config.n,
            "vectors": [[format_scalar(x) for x in v] for v in h.config.vectors],
        }
        if h.zauner is not None:
            item["zauner"] = zauner_payload(h.zauner)
        found.append(item)
    payload = {
        "d": args.d,
        "nmax": args.nmax,
        "norm": format_scalar(a),
        "gamma_valuation": format_valuation(gv),
        "count": len(found),
        "max_n": max((f["n"] for f in found), default=0),
        "configs": found,
    }
    return payload, _digest(raw), 0 if found else 1, "found" if found else "not found"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nawelch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-na", help="non-Archimedean Welch bound of order M")
    s.add_argument("--config", required=True)
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--general", action="store_true", help="bound without the unit-norm hypothesis")
    s.set_defaults(func=cmd_verify_na)

    s = sub.add_parser("zauner-na", help="non-Archimedean Zauner conditions (n = d^2)")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_zauner_na)

    s = sub.add_parser("equiangular-na", help="equiangular-line conditions")
    s.add_argument("--config", required=True)
    s.add_argument("--norm", required=True, help="common value of <v, v> (scalar text)")
    s.add_argument("--gamma-val", required=True, help="valuation of gamma, or 'inf' for gamma = 0")
    s.set_defaults(func=cmd_equiangular_na)

    s = sub.add_parser("verify-classical", help="Archimedean Welch bounds of order M")
    s.add_argument("--config", required=True)
    s.add_argument("--order", type=int, default=1)
    s.set_defaults(func=cmd_verify_classical)

    s = sub.add_parser("bounds", help="Gerzon, Welch and packing bounds table")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--field", choices=("r", "c"), required=True)
    s.add_argument("--orders", default="1")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("search-classical", help="random-restart coherence minimisation")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--field", choices=("r", "c"), required=True)
    s.add_argument("--trials", type=int, default=32)
    s.add_argument("--steps", type=int, default=2000)
    s.add_argument("--step-size", type=float, default=0.3)
    s.add_argument("--shrink", type=float, default=0.9)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_search_classical)

    s = sub.add_parser("search-na", help="enumerate non-Archimedean equiangular families")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--gens", required=True, help="JSON list of scalar texts")
    s.add_argument("--norm", default="1")
    s.add_argument("--gamma-val", required=True)
    s.set_defaults(func=cmd_search_na)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        payload, digest, code, verdict = args.func(args, out)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (DimensionMismatch, WrongCount, CertificateError, InvalidArgs) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    _emit(argv, digest, payload, verdict, out)
    return code


def main() -> None:
    sys.exit(run())
