mod common;

use std::path::PathBuf;

use common::{corrgraph, workspace_root, SYNTH_TICKERS};
use corrgraph_service::api::{
    to_json, BacktestRequest, CreateDatasetRequest, Dataset, GraphRequest, GraphResponse, LagModeName, LagsRequest,
    Mode, SchemeName, Weighting,
};

const EXAMPLE: [&str; 2] = ["--data-dir", "fixtures/example5"];

fn stdout(output: &std::process::Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &std::process::Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn run(args: &[&str]) -> std::process::Output {
    corrgraph(args)
}

#[test]
fn graph_on_example_fixture() {
    let output = run(&[
        "graph",
        "--tickers",
        "A,B,C,D,E",
        "--mode",
        "diversified",
        "--threshold",
        "0.21",
        "--json",
        EXAMPLE[0],
        EXAMPLE[1],
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let graph: GraphResponse = serde_json::from_str(stdout(&output).trim_end()).unwrap();
    assert_eq!(graph.edges, [[0, 1], [0, 4], [1, 2], [1, 4], [2, 4], [3, 4]]);
    assert_eq!(graph.selected, ["A", "B", "E"]);

    let table = stdout(&run(&[
        "graph",
        "--tickers",
        "A,B,C,D,E",
        "--mode",
        "diversified",
        "--threshold",
        "0.21",
        EXAMPLE[0],
        EXAMPLE[1],
    ]));
    assert!(table.contains("selected: A, B, E"), "{table}");
}

#[test]
fn corr_with_one_ticker_is_an_analysis_error() {
    let output = run(&["corr", "--tickers", "A", EXAMPLE[0], EXAMPLE[1]]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr(&output).contains("degenerate_series"), "{}", stderr(&output));
    assert!(output.stdout.is_empty());
}

#[test]
fn no_clique_is_an_analysis_error() {
    let output = run(&[
        "graph",
        "--tickers",
        "A,B,C,D,E",
        "--mode",
        "diversified",
        "--threshold",
        "0",
        EXAMPLE[0],
        EXAMPLE[1],
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr(&output).contains("no_clique"));
}

#[test]
fn usage_errors_exit_1() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["corr", "--bogus"],
        &["graph", "--tickers", "A,B", "--mode", "sideways"],
        &["graph", "--tickers", "A,B"],
        &["corr", "--start", "yesterday", "--tickers", "A,B"],
        &["corr", "--data-dir", "fixtures/example5"],
        &["corr", "--tickers", "A,a", "--data-dir", "fixtures/example5"],
        &["corr", "--tickers", "A,A", "--data-dir", "fixtures/example5"],
        &[
            "corr",
            "--tickers",
            "A,B",
            "--start",
            "2020-03-01",
            "--end",
            "2020-02-01",
            "--data-dir",
            "fixtures/example5",
        ],
        &[
            "backtest",
            "--portfolio",
            "A,B",
            "--weighting",
            "cap",
            "--benchmark",
            "A",
            "--data-dir",
            "fixtures/example5",
        ],
        &[
            "backtest",
            "--portfolio",
            "A,B",
            "--weighting",
            "cap",
            "--shares",
            "A=x",
            "--benchmark",
            "C",
            "--data-dir",
            "fixtures/example5",
        ],
        &[
            "backtest",
            "--portfolio",
            "A,Q",
            "--tickers",
            "A,B",
            "--benchmark",
            "C",
            "--data-dir",
            "fixtures/example5",
        ],
        &[
            "lags",
            "--target",
            "A",
            "--indicators",
            "B",
            "--max-lag",
            "0",
            "--data-dir",
            "fixtures/example5",
        ],
    ];
    for args in cases {
        let output = run(args);
        assert_eq!(output.status.code(), Some(1), "{args:?}: {}", stderr(&output));
        assert!(!stderr(&output).is_empty());
    }
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("BAD.csv"), "Date,Open\n2020-01-01,1\n").unwrap();
    let header = "Date,Open,High,Low,Close,Adj Close,Volume\n";
    std::fs::write(
        dir.path().join("SHORT.csv"),
        format!("{header}2020-01-01,1,1,1,1,1,1\n2020-01-02,1,1,1,1,1.1,1\n"),
    )
    .unwrap();
    let data = dir.path().to_str().unwrap();
    let cases: &[&[&str]] = &[
        &["corr", "--tickers", "A,ZZZ", "--data-dir", "fixtures/example5"],
        &["corr", "--tickers", "A,B", "--data-dir", "/definitely/not/here"],
        &["corr", "--tickers", "BAD,SHORT", "--data-dir", data],
        &["corr", "--tickers", "SHORT", "--data-dir", data],
        &[
            "signal",
            "--rule-file",
            "/definitely/not/a/rule.json",
            "--required-true",
            "1",
        ],
    ];
    for args in cases {
        let output = run(args);
        assert_eq!(output.status.code(), Some(2), "{args:?}: {}", stderr(&output));
    }
}

#[test]
fn help_and_version_exit_0() {
    for args in [&["--help"][..], &["--version"], &["graph", "--help"]] {
        let output = run(args);
        assert_eq!(output.status.code(), Some(0));
        assert!(!output.stdout.is_empty());
    }
}

#[test]
fn range_warnings_go_to_stderr() {
    let output = run(&[
        "corr",
        "--tickers",
        SYNTH_TICKERS,
        "--data-dir",
        "fixtures/synthetic10",
        "--json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stderr(&output).contains("warning: HHH"));
    serde_json::from_str::<serde_json::Value>(stdout(&output).trim_end()).unwrap();
}

#[test]
fn json_output_is_the_service_body() {
    let dataset = Dataset::load(
        &workspace_root().join("fixtures/synthetic10"),
        &CreateDatasetRequest {
            name: "x".into(),
            tickers: SYNTH_TICKERS.split(',').map(String::from).collect(),
            start: None,
            end: None,
        },
    )
    .unwrap();
    let data = [
        "--data-dir",
        "fixtures/synthetic10",
        "--tickers",
        SYNTH_TICKERS,
        "--json",
    ];
    let cli = |args: &[&str]| {
        let all: Vec<&str> = args.iter().chain(&data).copied().collect();
        let out = run(&all);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        stdout(&out).trim_end().to_string()
    };

    assert_eq!(cli(&["corr"]), to_json(&dataset.correlations().unwrap()));
    assert_eq!(
        cli(&["graph", "--mode", "undiversified"]),
        to_json(
            &dataset
                .graph(&GraphRequest {
                    mode: Mode::Undiversified,
                    threshold: None
                })
                .unwrap()
        )
    );
    assert_eq!(
        cli(&[
            "backtest",
            "--portfolio",
            "AAA,GGG",
            "--weighting",
            "equal",
            "--benchmark",
            "SPY"
        ]),
        to_json(
            &dataset
                .backtest(&BacktestRequest {
                    portfolio: vec!["AAA".into(), "GGG".into()],
                    weighting: Weighting {
                        scheme: SchemeName::EqualSum,
                        shares: None
                    },
                    benchmark: "SPY".into(),
                })
                .unwrap()
        )
    );
    assert_eq!(
        cli(&["lags", "--target", "JJJ", "--indicators", "AAA,FFF", "--max-lag", "12"]),
        to_json(
            &dataset
                .lags(&LagsRequest {
                    target: "JJJ".into(),
                    indicators: vec!["AAA".into(), "FFF".into()],
                    max_lag: 12,
                    mode: LagModeName::Windowed,
                })
                .unwrap()
        )
    );
}

#[test]
fn signal_reads_rule_file_and_overrides_target() {
    let dir = tempfile::tempdir().unwrap();
    let rule: PathBuf = dir.path().join("rule.json");
    std::fs::write(&rule, r#"{"relationships":[{"indicator":"IND","lag":1}]}"#).unwrap();
    let rule = rule.to_str().unwrap();
    let base = [
        "--data-dir",
        "fixtures/signal_hand",
        "--rule-file",
        rule,
        "--required-true",
        "1",
    ];

    let missing_target = run(&[&["signal"][..], &base].concat());
    assert_eq!(missing_target.status.code(), Some(1));

    let output = run(&[&["signal", "--target", "TGT", "--json"][..], &base].concat());
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let body: serde_json::Value = serde_json::from_str(stdout(&output).trim_end()).unwrap();
    assert_eq!(body["indicative"], serde_json::json!([100.0, 100.0, 99.0, 99.0]));
    assert_eq!(body["continuous"], serde_json::json!([100.0, 102.0, 101.0, 105.0]));

    std::fs::write(dir.path().join("rule.json"), "not json").unwrap();
    let output = run(&[&["signal", "--target", "TGT"][..], &base].concat());
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn run_is_callable_in_process() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let root = workspace_root();
    let data = root.join("fixtures/example5");
    let code = corrgraph_cli::run(
        [
            "corrgraph",
            "corr",
            "--tickers",
            "A,B,C,D,E",
            "--json",
            "--data-dir",
            data.to_str().unwrap(),
        ],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let body: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(body["tickers"].as_array().unwrap().len(), 5);
}
