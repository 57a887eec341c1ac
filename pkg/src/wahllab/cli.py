"""Command-line driver: ``wahllab <command> --curve spec.json [options]``.

Commands
  filtration     kernel chain ker μ_0 ⊇ ker μ_2 ⊇ ... with strictness and rank table
  rho-band       Zero / Band / Unknown structure of ρ(Q) for level representatives
  certify-point  h^0(2K - np) = 3g-3-n checks at the base point
  constants      the table c_{n,m}, n = 1..m+1
  osculating     annihilators of <ξ^1..ξ^n> in H^0(ω^2) and the flag point data
  report         everything above in one document

Exit codes: 0 success, 2 configuration error, 3 curve or point error,
4 insufficient truncation order, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .curves import (
    CurveModel,
    build_model,
    certify_general_point,
    load_curve_spec,
    parse_rational,
    section_space,
)
from .errors import ConfigError, InsufficientOrder, UncertifiedPoint, WahlLabError
from .gauss import Filtration, kernel_filtration, level_representative, rank_report
from .schiffer import (
    Tag,
    c_constant,
    geodesic_bound_report,
    osculating_flag,
    rho_band,
    schiffer_pairing_matrix,
)
from .linalg import rank

COMMANDS = ("filtration", "rho-band", "certify-point", "constants", "osculating", "report")


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def required_order(g: int, max_level: int) -> int:
    """Truncation needed to zero-test every filtration level up to max_level."""
    return max((max_level + 2) * (2 * g - 2) + max_level // 2, 2 * (2 * g - 2))


# -- argument handling -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wahllab", description="Higher Gaussian maps of canonical curves, exactly.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--curve", help="curve spec (JSON)")
    ap.add_argument("--point", help="base point override as X,Y (rationals, e.g. 0,-1 or 1/2,3)")
    ap.add_argument("--order", type=int, help="truncation order override")
    ap.add_argument("--max-level", type=int, help="deepest even filtration level (default 6g-6)")
    ap.add_argument("--exact-only", action="store_true", help="skip the advisory modular rank pass")
    ap.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--m", type=int, help="even level for `constants`")
    ap.add_argument("--level", type=int, help="restrict `rho-band` to quadrics of this level")
    ap.add_argument("--n", type=int, help="restrict `osculating` to this n")
    ap.add_argument("--negative-control", action="store_true",
                    help="allow hyperelliptic models (results are controls, not theorem checks)")
    return ap


def _parse_point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--point expects X,Y, got {text!r}")
    return tuple(parse_rational(p.strip()) for p in parts)


def _threads() -> int | None:
    raw = os.environ.get("WAHLLAB_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"WAHLLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("WAHLLAB_THREADS must be a positive integer")
    return n


def _load_model(args) -> tuple[CurveModel, dict]:
    if not args.curve:
        raise ConfigError(f"`{args.command}` needs --curve")
    spec = load_curve_spec(args.curve)
    point = _parse_point(args.point) if args.point else spec.point
    order = args.order if args.order is not None else spec.order
    g = spec.presentation.genus
    max_level = _max_level(args, g)
    if order is not None:
        if args.command in ("certify-point", "osculating"):
            need = 2 * (2 * g - 2)
        else:
            need = required_order(g, max_level)
        if order < need:
            raise InsufficientOrder(f"order {order} is too small for `{args.command}`: need at least {need}")
    model = build_model(spec.presentation, point, order)
    if not args.negative_control:
        model.require_theorem_model()
    echo = {
        "source": str(args.curve),
        "presentation": model.kind,
        "curve": spec.source.get("polynomial"),
        "point": None if model.base_point is None else [rat(c) for c in model.base_point],
        "coordinate": model.coordinate,
        "genus": model.genus,
        "order": model.order,
        "basis": list(model.labels),
        "negative_control": bool(args.negative_control),
    }
    return model, echo


def _max_level(args, g: int) -> int:
    top = 6 * g - 6
    if args.max_level is None:
        return top
    if args.max_level < 0 or args.max_level % 2 or args.max_level > top:
        raise ConfigError(f"--max-level must be even and in 0..{top}")
    return args.max_level


# -- report sections ---------------------------------------------------------

def constants_table(m: int) -> list[dict]:
    return [{"n": n, "m": m, "c": c_constant(n, m).to_json()} for n in range(1, m + 2)]


def certificate_section(model: CurveModel, theorem_mode: bool) -> dict:
    cert = certify_general_point(model, theorem_mode=theorem_mode)
    S = section_space(model, 2)
    return {
        "h0_omega2": S.dim,
        "expected_h0_omega2": S.expected_dim,
        "holds": cert.holds,
        "depth": cert.depth,
        "entries": [{"n": n, "dim": d, "expected": e, "holds": ok} for n, d, e, ok in cert.entries],
    }


def filtration_section(filt: Filtration) -> dict:
    chain = []
    for level, sub in filt.levels:
        chain.append({
            "level": level,
            "dim": sub.dim,
            "strict": None if level == 0 else filt.strict(level),
            "image_rank": filt.image_ranks.get(level),
        })
    return {"chain": chain, "dims": filt.dims, "terminated": filt.terminated, "depth": filt.depth}


def rank_section(filt: Filtration) -> dict:
    rep = rank_report(filt)
    return {
        "passed": rep.passed,
        "top_kernel_zero": rep.top_kernel_zero,
        "informative_l_max": rep.informative_l_max,
        "rows": [
            {"l": r.l, "level": r.level, "rank": r.rank, "rank_ok": r.rank_ok,
             "kernel_level": r.kernel_level, "kernel_dim": r.kernel_dim, "kernel_ok": r.kernel_ok,
             "bound": r.bound, "informative": r.informative}
            for r in rep.rows
        ],
    }


def modular_section(filt: Filtration, exact_only: bool) -> dict:
    if exact_only:
        return {"mode": "exact"}
    agree = all(filt.modular_ranks.get(L) == r for L, r in filt.image_ranks.items() if L in filt.modular_ranks)
    return {
        "mode": "exact+modular-advisory",
        "modular_ranks": {str(L): r for L, r in sorted(filt.modular_ranks.items())},
        "modular_agrees": agree,
    }


def band_section(model: CurveModel, filt: Filtration, only_level: int | None) -> list[dict]:
    cert = certify_general_point(model)
    out = []
    for level, sub in filt.levels:
        if only_level is not None and level != only_level:
            continue
        if level == filt.max_level or sub.dim == 0:
            continue
        Q = level_representative(model, filt, level)
        if Q is None:
            continue
        entry = {"level": level, "quadric": [rat(c) for c in Q.sym_vector()]}
        try:
            band = rho_band(model, Q, filt, cert)
        except UncertifiedPoint as exc:
            entry["error"] = str(exc)
            out.append(entry)
            continue
        entry.update({
            "size": band.size,
            "mu_at_p": rat(band.mu_value),
            "accidental_zero": band.accidental_zero,
            "admissible_depth": band.admissible_depth,
            "tags": [[t.value for t in row] for row in band.tags],
            "band": [
                {"n": n, "l": l, "value": band.values[(n, l)].to_json()}
                for n in range(1, band.size + 1) for l in range(1, band.size + 1)
                if band.tags[n - 1][l - 1] is Tag.BAND
            ],
        })
        out.append(entry)
    return out


def osculating_section(model: CurveModel, only_n: int | None) -> list[dict]:
    g = model.genus
    cert = certify_general_point(model)
    ns = [only_n] if only_n is not None else list(range(1, 3 * g - 2))
    out = []
    for n in ns:
        flag = osculating_flag(model, n, require_certified=only_n is not None, certificate=cert)
        M = schiffer_pairing_matrix(model, n)
        out.append({
            "n": n,
            "certified": flag.certified,
            "annihilator_dim": flag.annihilator.dim,
            "pairing_rank": rank(M),
            "annihilator": [[rat(c) for c in v] for v in flag.annihilator.vectors()],
            "bicanonical_point": [rat(c) for c in flag.bicanonical_point],
        })
    return out


def geodesic_section(filt: Filtration) -> dict:
    rep = geodesic_bound_report(filt)
    return {"strict_steps": rep.strict_steps, "bound": rep.bound, "vacuous": rep.vacuous,
            "no_geodesic_germs": rep.no_geodesic_germs, "statement": rep.statement}


# -- rendering ---------------------------------------------------------------

def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "filtration" in doc:
        w.writerow(["level", "dim", "strict", "image_rank"])
        for r in doc["filtration"]["chain"]:
            w.writerow([r["level"], r["dim"], "" if r["strict"] is None else r["strict"],
                        "" if r["image_rank"] is None else r["image_rank"]])
    if "rank_table" in doc:
        if buf.tell():
            w.writerow([])
        w.writerow(["l", "level", "rank", "rank_ok", "kernel_level", "kernel_dim", "kernel_ok", "bound", "informative"])
        for r in doc["rank_table"]["rows"]:
            w.writerow([r[k] for k in ("l", "level", "rank", "rank_ok", "kernel_level",
                                       "kernel_dim", "kernel_ok", "bound", "informative")])
    return buf.getvalue()


def to_text(doc: dict) -> str:
    lines = [f"wahllab {doc['command']}"]
    inp = doc.get("input")
    if inp:
        lines.append(f"  curve: {inp['presentation']} {inp.get('curve') or ''} at ({', '.join(inp['point'] or [])}), genus {inp['genus']}, "
                     f"order {inp['order']}, {inp['coordinate']}")
    if "constants" in doc:
        for r in doc["constants"]:
            lines.append(f"  c_{{{r['n']},{r['m']}}} = {r['c']['value']}·2πi")
    if "certificate" in doc:
        c = doc["certificate"]
        lines.append(f"  h0(ω^2) = {c['h0_omega2']}; certificate holds: {c['holds']} (depth {c['depth']})")
        for e in c["entries"]:
            mark = "ok" if e["holds"] else "FAIL"
            lines.append(f"    n={e['n']:>2}  dim {e['dim']:>2}  expected {e['expected']:>2}  {mark}")
    if "filtration" in doc:
        lines.append(f"  kernel chain: {doc['filtration']['dims']}")
    if "rank_table" in doc:
        rt = doc["rank_table"]
        lines.append(f"  rank bounds pass: {rt['passed']}; ker μ_top = 0: {rt['top_kernel_zero']}; "
                     f"informative for l <= {rt['informative_l_max']}")
    if "rho_band" in doc:
        for b in doc["rho_band"]:
            if "error" in b:
                lines.append(f"  level {b['level']}: {b['error']}")
                continue
            vals = ", ".join(f"({e['n']},{e['l']})={e['value']['value']}·2πi" for e in b["band"])
            lines.append(f"  level {b['level']}: μ(p) = {b['mu_at_p']}; band {vals}")
    if "osculating" in doc:
        for o in doc["osculating"]:
            lines.append(f"  n={o['n']:>2}  annihilator dim {o['annihilator_dim']}  pairing rank {o['pairing_rank']}"
                         f"{'' if o['certified'] else '  (uncertified)'}")
    if "geodesic_bound" in doc:
        lines.append(f"  {doc['geodesic_bound']['statement']}")
    if "arithmetic" in doc:
        lines.append(f"  arithmetic: {doc['arithmetic']['mode']}")
    if "timing_ms" in doc:
        lines.append(f"  time: {doc['timing_ms']} ms")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        if "filtration" not in doc and "rank_table" not in doc:
            raise ConfigError("CSV output covers the kernel chain and rank table only (filtration, report)")
        return to_csv(doc)
    return to_text(doc)


# -- driver ------------------------------------------------------------------

def run(args) -> dict:
    start = time.perf_counter()
    doc: dict = {"command": args.command}
    threads = _threads()
    if args.command == "constants":
        if args.m is None:
            raise ConfigError("`constants` needs --m")
        doc["constants"] = constants_table(args.m)
        doc["timing_ms"] = int((time.perf_counter() - start) * 1000)
        return doc
    model, echo = _load_model(args)
    doc["input"] = echo
    if threads is not None:
        doc["input"]["threads"] = threads
    theorem_mode = not args.negative_control
    if args.command == "certify-point":
        doc["certificate"] = certificate_section(model, theorem_mode)
    elif args.command == "osculating":
        doc["osculating"] = osculating_section(model, args.n)
    else:
        max_level = _max_level(args, model.genus)
        filt = kernel_filtration(model, max_level, theorem_mode=theorem_mode,
                                 modular_check=not args.exact_only)
        if args.command in ("filtration", "report"):
            doc["filtration"] = filtration_section(filt)
            if filt.terminated or filt.max_level == 6 * model.genus - 6:
                doc["rank_table"] = rank_section(filt)
                doc["geodesic_bound"] = geodesic_section(filt)
        if args.command in ("rho-band", "report"):
            doc["rho_band"] = band_section(model, filt, args.level)
        if args.command == "report":
            doc["certificate"] = certificate_section(model, theorem_mode)
            doc["osculating"] = osculating_section(model, None)
        doc["arithmetic"] = modular_section(filt, args.exact_only)
    doc["timing_ms"] = int((time.perf_counter() - start) * 1000)
    return doc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = render(run(args), args.format)
    except WahlLabError as exc:
        print(f"wahllab: error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
