"""Regenerate tests/golden/ from the embedded IVI fixture.

Run only after an intentional change to rendering; commit the diff.
"""

import contextlib
import io
from pathlib import Path

from riskbn.cli import main
from riskbn.fixtures import SYSTEM_COMPROMISE, ivi_network
from riskbn.model_io import save_model

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# file name -> CLI arguments after the model path
CASES = {
    "marginals_ve.md": ["marginals", "{model}"],
    "marginals_forward.md": ["marginals", "{model}", "--mode", "forward"],
    "marginals_ve.csv": ["marginals", "{model}", "--format", "csv"],
    "sweep_do.md": ["sweep-do", "{model}", "--target", SYSTEM_COMPROMISE],
    "sweep_do.csv": ["sweep-do", "{model}", "--target", SYSTEM_COMPROMISE, "--format", "csv"],
    "sweep_do.json": ["sweep-do", "{model}", "--target", SYSTEM_COMPROMISE, "--format", "json"],
    "sensitivity.md": ["sensitivity", "{model}", "--target", SYSTEM_COMPROMISE],
    "sensitivity.csv": ["sensitivity", "{model}", "--target", SYSTEM_COMPROMISE, "--format", "csv"],
    "sensitivity.json": ["sensitivity", "{model}", "--target", SYSTEM_COMPROMISE, "--format", "json"],
    "ivi.dot": ["export-dot", "{model}"],
}


def render(model_path: str, args: list[str]) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([a.format(model=model_path) for a in args])
    if code != 0:
        raise SystemExit(f"riskbn {' '.join(args)} exited {code}")
    return buf.getvalue()


if __name__ == "__main__":
    GOLDEN.mkdir(parents=True, exist_ok=True)
    model = GOLDEN / "ivi.model.json"
    save_model(ivi_network(), model, name="ivi")
    for name, args in CASES.items():
        (GOLDEN / name).write_text(render(str(model), args), encoding="utf-8", newline="\n")
        print(f"wrote {name}")
