"""Random search for the smallest S - G(f) across monotone metrics outside the proven range.

Report-only: nothing here decides whether the inequality holds.  Writes one
JSON summary per metric, including the instance that attains the minimum.
"""

from dataclasses import dataclass, field
from pathlib import Path

from _common import parse_into
from qfi_uncertainty.inequality_lab import explore
from qfi_uncertainty.jsonfmt import dumps
from qfi_uncertainty.monotone_metrics import parse_spec


@dataclass
class Config:
    metrics: list = field(default_factory=lambda: ["sld", "hgamma:0.75", "hgamma:0.5", "bkm"])
    dims: list = field(default_factory=lambda: [2, 3, 4])
    trials: int = 2000
    seed: int = 0
    out_dir: str = "results"


def main(cfg: Config):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for text in cfg.metrics:
        spec = parse_spec(text)
        summ = explore(spec, cfg.dims, cfg.trials, cfg.seed)
        name = spec.label.replace(":", "_")
        (out / f"explore_{name}.json").write_text(dumps(summ.as_dict()) + "\n")
        print(f"{spec.label:>12}  min_gap={summ.min_gap:+.6e}  below tolerance: {summ.violations_found}")


if __name__ == "__main__":
    main(parse_into(Config, __doc__.splitlines()[0]))
