#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

pub fn golden_dir() -> PathBuf {
    workspace_root().join("fixtures/golden")
}

/// Runs the built binary from the workspace root.
pub fn corrgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrgraph"))
        .args(args)
        .current_dir(workspace_root())
        .env_remove("CORRGRAPH_DATA_DIR")
        .output()
        .expect("spawn corrgraph")
}

pub const SYNTH_TICKERS: &str = "AAA,BBB,CCC,DDD,EEE,FFF,GGG,HHH,III,JJJ";

/// Frozen CLI invocations over `fixtures/synthetic10` and the file each
/// one's `--json` output is pinned to.
pub fn golden_cases() -> Vec<(&'static str, Vec<&'static str>)> {
    let data = ["--data-dir", "fixtures/synthetic10", "--json"];
    let with = |args: &[&'static str]| -> Vec<&'static str> { args.iter().chain(&data).copied().collect() };
    vec![
        ("corr.json", with(&["corr", "--tickers", SYNTH_TICKERS])),
        (
            "graph_diversified.json",
            with(&["graph", "--tickers", SYNTH_TICKERS, "--mode", "diversified"]),
        ),
        (
            "graph_undiversified.json",
            with(&[
                "graph",
                "--tickers",
                SYNTH_TICKERS,
                "--mode",
                "undiversified",
                "--threshold",
                "0.3",
            ]),
        ),
        (
            "backtest_price.json",
            with(&[
                "backtest",
                "--portfolio",
                "AAA,BBB,III",
                "--weighting",
                "price",
                "--benchmark",
                "^DJI",
            ]),
        ),
        (
            "backtest_cap.json",
            with(&[
                "backtest",
                "--portfolio",
                "DDD,EEE,HHH",
                "--weighting",
                "cap",
                "--shares",
                "DDD=1200,EEE=800,HHH=450",
                "--benchmark",
                "SPY",
            ]),
        ),
        (
            "lags.json",
            with(&["lags", "--target", "JJJ", "--indicators", "AAA,BBB,CCC,DDD,EEE"]),
        ),
        (
            "lags_full_series_means.json",
            with(&[
                "lags",
                "--target",
                "JJJ",
                "--indicators",
                "AAA,BBB,CCC",
                "--max-lag",
                "20",
                "--lag-mode",
                "full-series-means",
            ]),
        ),
        (
            "signal_n0.json",
            with(&[
                "signal",
                "--rule-file",
                "fixtures/golden/lags.json",
                "--required-true",
                "0",
            ]),
        ),
        (
            "signal_n2.json",
            with(&[
                "signal",
                "--rule-file",
                "fixtures/golden/lags.json",
                "--required-true",
                "2",
            ]),
        ),
    ]
}
