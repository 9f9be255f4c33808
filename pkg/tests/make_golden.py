"""Regenerate the golden files under tests/golden.

    python3 tests/make_golden.py

Writes strategy profiles, diagnostic listings for the bad-source corpus and
the output of every CLI run in ``corpus.CORPUS``.  Review the diff before
committing: the tests compare against these files byte for byte, and
test_cli cross-checks the enumeration goldens against the oracles.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from corpus import CORPUS, GOLDEN, ROOT, invoke  # noqa: E402

from opengames.analysis import closed_context, enumerate_pure_equilibria  # noqa: E402
from opengames.cases import IrrigationParams, equitable_profile  # noqa: E402
from opengames.dsl import compile_source, load_model  # noqa: E402


def diag_listing(source: str) -> str:
    g, diags = compile_source(source)
    return "ok\n" if g is not None else "".join(f"{d}\n" for d in diags)


def write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def profiles() -> None:
    out = GOLDEN / "profiles"
    out.mkdir(parents=True, exist_ok=True)
    for v in "bcd":
        g = load_model(ROOT / "models" / f"irrigation_{v}.og")
        write_json(out / f"irrigation_{v}_equitable.json", equitable_profile(g, IrrigationParams(variant=v.upper())).to_json(g))
    g = load_model(ROOT / "models" / "irrigation_d.og")
    (only, _), = enumerate_pure_equilibria(g, closed_context(g))
    write_json(out / "irrigation_d_equilibrium.json", only.to_json(g))
    g = load_model(ROOT / "models" / "hurwicz.og")
    (first, _), *_ = enumerate_pure_equilibria(g, closed_context(g))
    full = first.to_json(g)
    write_json(out / "hurwicz_equilibrium.json", full)
    write_json(out / "hurwicz_missing.json", {k: v for k, v in full.items() if k != "decide/pol"})


def main() -> None:
    profiles()
    for src in sorted((GOLDEN / "dsl").glob("*.og")):
        src.with_suffix(".diag").write_text(diag_listing(src.read_text(encoding="utf-8")), encoding="utf-8")
    for r in CORPUS:
        code, out, _ = invoke(r.argv, jobs=1)
        if code != r.exit:
            raise SystemExit(f"{r.name}: exit {code}, expected {r.exit}")
        r.golden.write_text(out, encoding="utf-8")
        print(f"{r.name}: exit {code}, {len(out)} bytes")


if __name__ == "__main__":
    main()
