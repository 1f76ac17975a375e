use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::Parser;
use homcharfun::suite::{exit_code, run_suite_with, Backend, Residual, SuiteConfig, VerificationReport, CHECKS};
use homcharfun::{Error, Result};

/// Runs verification checks and writes one JSON line per check.
#[derive(Parser, Debug)]
#[command(name = "homcheck", version)]
struct Args {
    /// JSON configuration file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Check id to run (repeatable); `all` selects every registered check.
    #[arg(long = "check")]
    checks: Vec<String>,
    #[arg(long)]
    lambda: Option<String>,
    /// Comma-separated weights, e.g. `1,1/2`.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<String>>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    hardy_truncation: Option<usize>,
    #[arg(long)]
    interior: Option<usize>,
    /// Comma-separated complex literals, e.g. `0.3,-0.4+0.2i`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<String>>,
    /// Per-check tolerance override `id=value` (repeatable).
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
    #[arg(long)]
    backend: Option<Backend>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write JSON lines here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// List registered check ids and exit.
    #[arg(long)]
    list: bool,
}

fn build_config(args: &Args) -> Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(l) = &args.lambda {
        cfg.lambda = l.clone();
    }
    if let Some(m) = &args.mu {
        cfg.mu = m.clone();
    }
    if let Some(n) = args.truncation {
        cfg.truncation = n;
    }
    if let Some(n) = args.hardy_truncation {
        cfg.hardy_truncation = n;
    }
    if let Some(n) = args.interior {
        cfg.interior = n;
    }
    if let Some(g) = &args.grid {
        cfg.grid = g.clone();
    }
    if let Some(b) = args.backend {
        cfg.backend = b;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    for t in &args.tolerances {
        let (id, v) = t.split_once('=').ok_or_else(|| Error::Config(format!("tolerance {t:?} is not id=value")))?;
        let v: f64 = v.parse().map_err(|_| Error::Config(format!("tolerance {t:?} has a bad value")))?;
        cfg.tolerances.insert(id.to_string(), v);
    }
    if !args.checks.is_empty() {
        cfg.checks = args.checks.clone();
    }
    if cfg.checks.iter().any(|c| c == "all") {
        cfg.checks = CHECKS.iter().map(|(id, _)| id.to_string()).collect();
    }
    Ok(cfg)
}

fn summary(reports: &[VerificationReport], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{:<24} {:<8} {:>12} {:>10} {:>10}", "check", "status", "residual", "tolerance", "ms")?;
    for r in reports {
        let residual = match r.residual {
            Some(Residual::Exact) => "exact".to_string(),
            Some(Residual::Value(v)) => format!("{v:.3e}"),
            None => "-".to_string(),
        };
        let status = serde_json::to_value(r.status).unwrap_or_default();
        writeln!(
            out,
            "{:<24} {:<8} {:>12} {:>10.0e} {:>10.1}",
            r.check,
            status.as_str().unwrap_or("?"),
            residual,
            r.tolerance,
            r.elapsed_ms
        )?;
    }
    Ok(())
}

fn open_sink(path: Option<&PathBuf>) -> io::Result<Box<dyn Write + Send>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout()),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for (id, tol) in CHECKS {
            println!("{id:<24} {tol:e}");
        }
        return ExitCode::SUCCESS;
    }

    let sink = match open_sink(args.report.as_ref()) {
        Ok(s) => Mutex::new(s),
        Err(e) => {
            eprintln!("homcheck: cannot open report: {e}");
            return ExitCode::from(2);
        }
    };
    let emit = |r: &VerificationReport| {
        let mut w = sink.lock().expect("report sink");
        let _ = serde_json::to_writer(&mut *w, r);
        let _ = writeln!(w);
        let _ = w.flush();
    };

    let result = build_config(&args).and_then(|cfg| run_suite_with(&cfg, &emit));
    match result {
        Ok(reports) => {
            // Keep stdout machine-readable when it carries the JSON lines.
            let _ = if args.report.is_some() {
                summary(&reports, &mut io::stdout())
            } else {
                summary(&reports, &mut io::stderr())
            };
            ExitCode::from(exit_code(&reports) as u8)
        }
        Err(e) => {
            emit(&VerificationReport::config_error(&e.to_string()));
            eprintln!("homcheck: {e}");
            ExitCode::from(2)
        }
    }
}
