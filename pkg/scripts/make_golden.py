"""Regenerate the pinned golden artifacts for the sample report.

Run from the repository root after an intentional behaviour change:
    python scripts/make_golden.py
and review the diff before committing.
"""

from pathlib import Path

from ctix.pipeline import PipelineConfig, run_pipeline

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"

GOLDEN_CONFIG = PipelineConfig(
    mode="both",
    window=64,
    stride=32,
    deterministic_ids=True,
    pinned_timestamp="2026-01-02T03:04:05Z",
    bundle_seed="golden",
)


def main() -> None:
    result = run_pipeline(GOLDEN_CONFIG, [DATA / "sample_report.txt"])
    assert result.ok, result.manifest
    (DATA / "golden_bundle.json").write_text(result.bundle_json, encoding="utf-8")
    (DATA / "golden_chunks.conll").write_text(result.conll_text, encoding="utf-8")
    print(f"wrote {DATA / 'golden_bundle.json'} ({len(result.bundle.objects)} objects)")
    print(f"wrote {DATA / 'golden_chunks.conll'}")


if __name__ == "__main__":
    main()
