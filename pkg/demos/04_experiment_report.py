"""The full experiment protocol on a small scale.

Sweeps two training fractions with two runs each, trains the baseline and
the reading agent on every split, and writes the deterministic report
files (per-cell CSV, aggregate CSV, JSON report, reading histogram) to
demo_output/. Takes a minute or two.
"""

from pathlib import Path

from stc import synthetic
from stc.evaluation import ExperimentPlan, run_experiment, write_report_files
from stc.learn import RolloutConfig
from stc.policy import ClassifierConfig

spec = synthetic.SyntheticSpec(
    n_categories=3,
    docs_per_class=60,
    sentences_per_doc=5,
    keyword_positions=(1, 2, 3),
    noise_vocab_size=25,
    seed=21,
)
raw = synthetic.generate(spec)
print(f"corpus: {len(raw)} documents")

plan = ExperimentPlan(
    mode="mono",
    fractions=(0.1, 0.5),
    n_runs=2,
    seed=5,
    rollout=RolloutConfig(
        n_states=2000, iterations=4, classifier=ClassifierConfig(lam=1e-3, epochs=5)
    ),
    stc_lambda_grid=(1e-3,),
    baseline=ClassifierConfig(epochs=5),
    baseline_lambda_grid=(1e-4, 1e-3),
    histogram_fraction=0.5,
    histogram_bins=10,
)
report = run_experiment(raw, plan)

print("\naggregate results (best regularization per cell by mean micro-F1):")
header = f"{'method':9} {'fraction':8} {'micro-F1':>12} {'macro-F1':>12} {'reading':>9}"
print(header)
for row in report.aggregates:
    reading = f"{row.reading_size_mean:.3f}" if row.reading_size_mean is not None else "-"
    print(
        f"{row.method:9} {row.fraction:<8} "
        f"{row.micro_f1_mean:.3f} +/- {row.micro_f1_std:.3f} "
        f"{row.macro_f1_mean:.3f} +/- {row.macro_f1_std:.3f} {reading:>9}"
    )

out_dir = Path(__file__).parent / "demo_output"
written = write_report_files(report, out_dir)
print("\nreport files:")
for name, path in sorted(written.items()):
    print(f"  {name}: {path}")

if report.histogram:
    print("\nreading-size histogram at fraction 0.5 (pooled over runs):")
    peak = max(count for _, _, count in report.histogram)
    for lo, hi, count in report.histogram:
        bar = "#" * (0 if peak == 0 else round(24 * count / peak))
        print(f"  ({lo:.1f}, {hi:.1f}] {count:4d} {bar}")
