"""Run the full pipeline on the bundled sample report and print a summary.

Usage:
    python scripts/run_demo.py [report.txt ...]

Without arguments it processes tests/data/sample_report.txt with the stub
backends, deterministic ids, and a pinned clock, then prints the extraction
counts, a few example relations, and the first objects of the bundle.
"""

import sys
from pathlib import Path

from ctix.pipeline import PipelineConfig, run_pipeline

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    inputs = [Path(p) for p in sys.argv[1:]] or [ROOT / "tests" / "data" / "sample_report.txt"]
    config = PipelineConfig(
        mode="both",
        window=64,
        stride=32,
        deterministic_ids=True,
        pinned_timestamp="2026-01-02T03:04:05Z",
        bundle_seed="demo",
    )
    result = run_pipeline(config, inputs)
    for doc in result.documents:
        print(f"document {doc.doc_id}: ok={doc.ok}")
        if not doc.ok:
            print(f"  error: {doc.error}")
            continue
        for key, value in doc.counts.items():
            print(f"  {key:>18}: {value}")
        print("  example entities:", [s.text for s in doc.entities[:6]])
        print("  example IOCs:", [m.refanged_value for m in doc.ioc_matches[:6]])
        for rel in doc.relations[:6]:
            print(f"  relation: {rel.source.text} --{rel.relation.value}--> "
                  f"{rel.target.text} ({rel.score:.2f})")
    print(f"bundle: {len(result.bundle.objects)} objects, id {result.bundle.id}")
    print(result.bundle_json[: result.bundle_json.index(']')][:600])


if __name__ == "__main__":
    main()
