"""Command-line surface: quasifixed, density, iq, fold, certify, verify.

Every subcommand prints the same content as JSON or as indented text, takes
all randomness from an explicit seed, and uses stable exit codes:
0 success/verified, 1 not-found or failed verification, 2 usage or parse
errors (including cap breaches).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .certify import (
    CertificateFormatError,
    CertifyConfig,
    CertifyError,
    certificate_from_bytes,
    search_certificate,
    verify_certificate,
)
from .dynamics import (
    EnumerationCapExceeded,
    VarietySpec,
    enumerate_quasi_fixed,
    find_quasi_fixed_avoiding,
)
from .freegroup import FreeEndo, Word, WordError, stallings_fold, subgroup_rank
from .gf import DEFAULT_ORDER_CAP, FieldError
from .poly import (
    IqSystem,
    PolyError,
    PolyMap,
    PolyParseError,
    iterate_congruence_check,
    parse_poly,
)

USAGE_ERRORS = (PolyParseError, PolyError, WordError, FieldError,
                EnumerationCapExceeded, CertifyError, CertificateFormatError,
                OSError, ValueError)


def order_cap_from_env() -> int:
    raw = os.environ.get("QUASIFIX_CAP")
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise FieldError(f"QUASIFIX_CAP must be an integer, got {raw!r}") from exc
    if cap < 2:
        raise FieldError(f"QUASIFIX_CAP must be >= 2, got {cap}")
    return cap


def _render_text(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(item)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item)}")
        return lines
    return [f"{pad}{json.dumps(value)}"]


def emit(data: dict, fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(_render_text(data)) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _split_polys(raw: str) -> list[str]:
    return [chunk.strip() for chunk in raw.split(",")]


def cmd_quasifixed(args) -> int:
    cap = order_cap_from_env()
    pmap = PolyMap.parse(_split_polys(args.map), args.n, args.p)
    witnesses = [w.to_dict() for w in enumerate_quasi_fixed(pmap, args.smax,
                                                            order_cap=cap)]
    emit({"command": "quasifixed", "p": args.p, "nvars": args.n,
          "map": [f.to_text() for f in pmap.coords], "smax": args.smax,
          "count": len(witnesses), "witnesses": witnesses},
         args.format, args.out)
    return 0


def cmd_density(args) -> int:
    cap = order_cap_from_env()
    pmap = PolyMap.parse(_split_polys(args.map), args.n, args.p)
    v_texts = _split_polys(args.v) if args.v else []
    v = VarietySpec.parse(v_texts, args.n, args.p)
    w_spec = parse_poly(args.w, args.n, args.p)
    witness = find_quasi_fixed_avoiding(pmap, v, w_spec, args.smax, order_cap=cap)
    payload = {"command": "density", "p": args.p, "nvars": args.n,
               "map": [f.to_text() for f in pmap.coords],
               "variety": [f.to_text() for f in v.polys],
               "avoid": w_spec.to_text(), "smax": args.smax,
               "found": witness is not None}
    if witness is None:
        payload["frontier"] = {"smax_scanned": args.smax, "order_cap": cap}
        emit(payload, args.format, args.out)
        return 1
    payload["witness"] = witness.to_dict()
    emit(payload, args.format, args.out)
    return 0


def cmd_iq(args) -> int:
    pmap = PolyMap.parse(_split_polys(args.map), args.n, args.p)
    system = IqSystem(pmap, args.q)
    congruence = {str(j): iterate_congruence_check(system, j)
                  for j in range(1, args.j + 1)}
    emit({"command": "iq", "p": args.p, "nvars": args.n,
          "map": [f.to_text() for f in pmap.coords], "Q": args.q,
          "dimension": system.quotient_dimension(), "congruence": congruence},
         args.format, args.out)
    return 0


def cmd_fold(args) -> int:
    words = [Word.parse(text, args.k) for text in args.words]
    graph = stallings_fold(words, args.k)
    emit({"command": "fold", "k": args.k,
          "words": [w.to_text() for w in words],
          "vertices": len(graph.vertices), "edges": len(graph.edges),
          "rank": subgroup_rank(graph)},
         args.format, args.out)
    return 0


def cmd_certify(args) -> int:
    cap = order_cap_from_env()
    with open(args.endo, "r", encoding="utf-8") as handle:
        endo_data = json.load(handle)
    phi = FreeEndo.from_dict(endo_data)
    w = Word.parse(args.word, phi.rank)
    config = CertifyConfig(s_max=args.smax, seeds_per_field=args.seeds,
                           orbit_budget=args.budget, seed=args.seed,
                           allow_noninjective=args.allow_noninjective,
                           order_cap=cap)
    outcome = search_certificate(phi, w, config)
    if not outcome.found:
        emit({"command": "certify", "found": False, "reason": outcome.reason,
              "frontier": [{"p": p, "s": s, "seeds": n}
                           for (p, s, n) in outcome.frontier]},
             args.format, None)
        return 1
    cert = outcome.certificate
    with open(args.out, "wb") as handle:
        handle.write(cert.to_bytes())
    verdict = verify_certificate(cert, order_cap=cap)
    emit({"command": "certify", "found": True, "certificate_path": args.out,
          "p": cert.p, "s": cert.s, "period": cert.period,
          "verdict": verdict.to_dict()},
         args.format, None)
    return 0 if verdict.passed else 1


def cmd_verify(args) -> int:
    cap = order_cap_from_env()
    with open(args.certificate, "rb") as handle:
        cert = certificate_from_bytes(handle.read())
    verdict = verify_certificate(cert, order_cap=cap)
    emit({"command": "verify", "certificate_path": args.certificate,
          "verdict": verdict.to_dict()},
         args.format, args.out)
    return 0 if verdict.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasifix",
        description="Quasi-fixed points of polynomial maps over finite fields "
                    "and finite-quotient certificates for free-group mapping tori.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--out", default=None, help="write output to a file")

    qf = sub.add_parser("quasifixed", help="enumerate quasi-fixed witnesses")
    qf.add_argument("--p", type=int, required=True, help="characteristic")
    qf.add_argument("--n", type=int, required=True, help="number of variables")
    qf.add_argument("--map", required=True,
                    help="comma-separated coordinate polynomials, e.g. 'x1^2,x1*x2'")
    qf.add_argument("--smax", type=int, default=3, help="largest field degree")
    add_common(qf)
    qf.set_defaults(func=cmd_quasifixed)

    de = sub.add_parser("density", help="find a quasi-fixed witness avoiding W")
    de.add_argument("--p", type=int, required=True)
    de.add_argument("--n", type=int, required=True)
    de.add_argument("--map", required=True)
    de.add_argument("--v", default="", help="variety polynomials (empty = all of A^n)")
    de.add_argument("--w", required=True, help="polynomial cutting out the set to avoid")
    de.add_argument("--smax", type=int, default=4)
    add_common(de)
    de.set_defaults(func=cmd_density)

    iq = sub.add_parser("iq", help="quotient dimension and iterate congruences")
    iq.add_argument("--p", type=int, required=True)
    iq.add_argument("--n", type=int, required=True)
    iq.add_argument("--map", required=True)
    iq.add_argument("--q", type=int, required=True, help="the power Q of p")
    iq.add_argument("--j", type=int, default=2, help="check iterates 1..j")
    add_common(iq)
    iq.set_defaults(func=cmd_iq)

    fo = sub.add_parser("fold", help="fold words and report the subgroup rank")
    fo.add_argument("--k", type=int, required=True, help="ambient free-group rank")
    fo.add_argument("words", nargs="+", help="words generating the subgroup")
    add_common(fo)
    fo.set_defaults(func=cmd_fold)

    ce = sub.add_parser("certify", help="search a finite-quotient certificate")
    ce.add_argument("--endo", required=True,
                    help="JSON file {\"rank\": k, \"images\": [...]}")
    ce.add_argument("--word", required=True, help="word to separate from 1")
    ce.add_argument("--seed", type=int, default=0)
    ce.add_argument("--smax", type=int, default=6)
    ce.add_argument("--seeds", type=int, default=64, help="seeds per field degree")
    ce.add_argument("--budget", type=int, default=10**7, help="orbit step budget")
    ce.add_argument("--allow-noninjective", action="store_true")
    ce.add_argument("--format", choices=("json", "text"), default="text")
    ce.add_argument("--out", default="certificate.json",
                    help="certificate file path")
    ce.set_defaults(func=cmd_certify)

    ve = sub.add_parser("verify", help="independently verify a certificate file")
    ve.add_argument("certificate", help="certificate JSON file")
    add_common(ve)
    ve.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
