mod es;
mod scalar;
mod simulate;
mod surface;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{Cli, Command};
use crate::error::{CliError, Result};
use crate::output;

/// Per-invocation settings shared by every command.
pub struct Context {
    pub seed: u64,
}

impl Context {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.into())
        .build()?;
    let ctx = Context { seed: cli.seed };
    // render fully before touching the sink so failures leave no partial file
    let text = pool.install(|| render(&cli.command, &ctx))?;
    let mut out = output::sink(cli.out.as_deref())?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn render(command: &Command, ctx: &Context) -> Result<String> {
    match command {
        Command::Simulate(a) => simulate::simulate(a, ctx),
        Command::Predict(a) => simulate::predict(a),
        Command::FixedPoints(a) => scalar::fixed_points(a),
        Command::Bifurcate(a) => scalar::bifurcate(a),
        Command::Cobweb(a) => scalar::cobweb(a),
        Command::Diagram(a) => scalar::diagram(a),
        Command::Surface(a) => surface::surface(a),
        Command::EsReport(a) => es::report(a, ctx),
    }
}

fn json<T: serde::Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    output::write_json(&mut buf, value)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn required<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required here")))
}
