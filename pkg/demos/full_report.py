"""Run the whole battery and write the JSON report plus CSV plot data."""

import sys
import tempfile
from pathlib import Path

from gfht.report import AnalysisConfig, emit_reference_rows, run_analysis, summary_lines, write_csvs
from gfht.testimages import make

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="gfht-"))
img = make("natural", 256)
report = run_analysis(img, "report", AnalysisConfig(trials=20), image_id="natural256")

print("\n".join(summary_lines(report)))
print()
print(emit_reference_rows(report))

(out / "report.json").write_text(report.to_json())
for path in write_csvs(report, out / "plots"):
    print("wrote", path)
print("wrote", out / "report.json")
