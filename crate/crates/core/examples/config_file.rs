//! Builds a run from `key = value` text, the same format the CLI reads
//! with `--config`, and writes CSV to stdout.

use tailsum::experiment::config::parse_config_text;
use tailsum::experiment::{run_estimate, ExperimentConfig, SHORT_DIGITS};

const RUN: &str = "
# five survival-Gumbel Pareto risks
family = gumbel
mode = survival
tau = 0.5
marginals = pareto:2.5,2.5,2.5,2.5,2.5
s = 20, 200
estimator = nr2, nr4
kappa = 0.6
reps = 20000
seed = 11
";

fn main() -> tailsum::Result<()> {
    let cfg = ExperimentConfig::from_pairs(&parse_config_text(RUN)?)?;
    run_estimate(&cfg)?.write_csv(std::io::stdout(), SHORT_DIGITS)
}
