"""Command-line front end.

    parsym <command> [--input FILE] [--epsilon X] [--tol Y] [--seed N] [--count M] [--json]

Commands: tate, parshin, refined, log, verify, fuzz, example54.  Exit status
is 0 when every check passes, 1 on a failed check and 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .io import InputError, corpus_to_dict, dumps, load_document
from .report import example54_corpus, example54_report, exact_report, fuzz_one, log_report, symbol_table

COMMANDS = ("tate", "parshin", "refined", "log", "verify", "fuzz", "example54")
NEEDS_INPUT = ("tate", "parshin", "refined", "log", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    epsilon: float = 1e-2
    tol: float = 1e-6
    seed: int = 0
    count: int = 1
    json: bool = False
    dump: str | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError("command", f"unknown command {self.command!r}")
        if self.epsilon <= 0:
            raise InputError("--epsilon", "must be positive")
        if self.tol <= 0:
            raise InputError("--tol", "must be positive")
        if self.count < 1:
            raise InputError("--count", "must be at least 1")
        if self.command in NEEDS_INPUT and not self.input:
            raise InputError("--input", f"{self.command} needs an instance file")


def _per_instance(cfg: RunConfig) -> dict:
    items = load_document(cfg.input)
    results = []
    for inst in items:
        if cfg.command == "verify":
            results.append(exact_report(inst))
        elif cfg.command == "log":
            results.append(log_report(inst, cfg.tol, cfg.epsilon))
        else:
            try:
                results.append(symbol_table(inst, cfg.command))
            except ValueError as exc:
                raise InputError("$.model", str(exc)) from None
    return {"results": results, "pass": all(r["pass"] for r in results)}


def _fuzz(cfg: RunConfig) -> dict:
    rows = [fuzz_one(cfg.seed + i, cfg.tol) for i in range(cfg.count)]
    failed = [r for r in rows if not r["pass"]]
    dumped = []
    if failed:
        out = Path(cfg.dump or "fuzz_failures")
        out.mkdir(parents=True, exist_ok=True)
        for r in failed:
            p = out / f"seed_{r['seed']}.json"
            p.write_text(
                dumps({"model": "corpus", "instances": [r["tate_instance"], r["surface_instance"]]})
            )
            dumped.append(str(p))
    return {
        "passed": len(rows) - len(failed),
        "total": len(rows),
        "failures": [{"seed": r["seed"], "checks": r["checks"]} for r in failed],
        "dumped": dumped,
        "pass": not failed,
    }


def _example54(cfg: RunConfig) -> dict:
    rep = example54_report()
    if cfg.dump:
        Path(cfg.dump).write_text(dumps(corpus_to_dict(example54_corpus())))
    return rep


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report document)."""
    echo = {k: v for k, v in asdict(cfg).items() if k != "json"}
    try:
        cfg.validate()
        if cfg.command == "fuzz":
            body = _fuzz(cfg)
        elif cfg.command == "example54":
            body = _example54(cfg)
        else:
            body = _per_instance(cfg)
    except InputError as exc:
        return 2, {"config": echo, "error": str(exc), "field": exc.field, "pass": False}
    return (0 if body["pass"] else 1), {"config": echo, **body}


def _human(doc: dict) -> str:
    cfg = doc["config"]
    if "error" in doc:
        return f"input error: {doc['error']}"
    lines = []
    if cfg["command"] == "fuzz":
        lines.append(f"fuzz: {doc['passed']}/{doc['total']} pass")
        for f in doc["failures"]:
            bad = ", ".join(k for k, v in f["checks"].items() if not v)
            lines.append(f"  seed {f['seed']}: {bad}")
        for p in doc["dumped"]:
            lines.append(f"  wrote {p}")
    elif cfg["command"] == "example54":
        for it in doc["items"]:
            lines.append(
                f"a,b,c={','.join(it['abc'])} symbols={' '.join(it['closed_form'])} "
                f"product={it['product']} {'ok' if it['pass'] else 'FAIL'}"
            )
    else:
        for i, r in enumerate(doc["results"]):
            lines.extend(_human_result(i, r))
    lines.append("PASS" if doc["pass"] else "FAIL")
    return "\n".join(lines)


def _human_result(i: int, r: dict) -> list[str]:
    out = [f"[{i}] {r['model']}" + (f" C0={r['C0']}" if "C0" in r else "")]
    if "weil" in r:
        r = {**r, "points": r["weil"]["points"], "product": r["weil"]["product"]}
    if "parshin" in r and isinstance(r["parshin"], dict):
        for kind in ("parshin", "refined"):
            out.append(f"  {kind} product = {r[kind]['product']}")
        out.append(f"  cyclic identity {'ok' if r['parshin']['cyclic_ok'] else 'FAIL'}")
        return out
    if "lattice" in r:
        for p in r["points"]:
            extra = ""
            if "additivity_residual" in p:
                extra = f" additivity={p['additivity_residual']:.2e} cyclic={p['cyclic_residual']:.2e}"
            out.append(f"  {p['point']}: {'ok' if p.get('pass', True) else 'FAIL'}{extra}")
        lat = r["lattice"]
        lats = lat.values() if "kind" not in lat else [lat]
        for l in lats:
            out.append(f"  lattice {l['kind']}: residual={l['lattice_residual']:.2e} M={l['M']}")
        return out
    for p in r["points"]:
        val = next(p[k] for k in ("symbol", "parshin", "refined") if k in p)
        out.append(f"  {p['point']}: {val}")
    out.append(f"  product = {r['product']}")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parsym", description="Tate, Parshin and refined symbols with reciprocity checks")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="instance file (json)")
    ap.add_argument("--epsilon", type=float, default=1e-2, help="torus radius for the log checks")
    ap.add_argument("--tol", type=float, default=1e-6, help="numeric tolerance")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="print the structured report")
    ap.add_argument("--dump", help="fuzz: directory for failing instances; example54: write the corpus here")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        epsilon=args.epsilon,
        tol=args.tol,
        seed=args.seed,
        count=args.count,
        json=args.json,
        dump=args.dump,
    )
    status, doc = run(cfg)
    sys.stdout.write(dumps(doc) if cfg.json else _human(doc) + "\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
