//! Reproduces a reduced version of a preset table through the library
//! driver and prints it as markdown.

use tailsum::estimators::Estimator;
use tailsum::experiment::{run_preset, ParamChoice, Preset, RunOptions, SHORT_DIGITS};

fn main() -> tailsum::Result<()> {
    let opts = RunOptions {
        reps: 20_000,
        seed: 7,
        pilot_reps: 2_000,
        lambda: ParamChoice::Tune,
        kappa: ParamChoice::Tune,
        m: Some(12),
        allow_large_grid: false,
        timings: false,
    };
    let table = run_preset(Preset::Table3, &Estimator::CONDITIONAL, true, &opts)?;
    print!("{}", table.to_markdown(SHORT_DIGITS));
    Ok(())
}
