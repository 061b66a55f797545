use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use corrgraph_core::ingest::{PriceTable, CSV_HEADER};
use corrgraph_core::{load_price_table, Ticker};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn write_random_file(dir: &Path, symbol: &str, rng: &mut ChaCha8Rng) {
    let mut body = CSV_HEADER.join(",") + "\n";
    let mut price: f64 = rng.gen_range(10.0..200.0);
    let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    for day in 0..120u64 {
        if rng.gen_bool(0.15) {
            continue;
        }
        let date = start + chrono::Days::new(day);
        price *= 1.0 + rng.gen_range(-0.03..0.03);
        let adj = if rng.gen_bool(0.05) {
            "null".to_string()
        } else {
            format!("{price}")
        };
        body.push_str(&format!("{date},{p},{p},{p},{p},{adj},1000\n", p = price));
    }
    fs::write(dir.join(format!("{symbol}.csv")), body).unwrap();
}

fn fixture() -> (tempfile::TempDir, Vec<Ticker>) {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let tickers: Vec<Ticker> = ["AAA", "BBB", "CCC", "DDD"]
        .iter()
        .map(|s| Ticker::new(*s).unwrap())
        .collect();
    for t in &tickers {
        write_random_file(dir.path(), t.as_str(), &mut rng);
    }
    (dir, tickers)
}

fn range() -> (NaiveDate, NaiveDate) {
    (
        NaiveDate::from_ymd_opt(2020, 1, 15).unwrap(),
        NaiveDate::from_ymd_opt(2020, 4, 1).unwrap(),
    )
}

#[test]
fn ticker_order_only_permutes_columns() {
    let (dir, tickers) = fixture();
    let (s, e) = range();
    let forward: PriceTable<f64> = load_price_table(dir.path(), &tickers, s, e).unwrap();
    let mut reversed = tickers.clone();
    reversed.reverse();
    let backward: PriceTable<f64> = load_price_table(dir.path(), &reversed, s, e).unwrap();
    assert_eq!(forward.dates(), backward.dates());
    for t in &tickers {
        assert_eq!(forward.column_of(t).unwrap(), backward.column_of(t).unwrap());
    }
    assert!(forward.dates().iter().all(|d| (s..=e).contains(d)));
}

#[test]
fn returns_reconstruct_prices() {
    let (dir, tickers) = fixture();
    let (s, e) = range();
    let table: PriceTable<f64> = load_price_table(dir.path(), &tickers, s, e).unwrap();
    let returns = table.to_returns();
    assert_eq!(returns.len(), table.len() - 1);
    for k in 0..tickers.len() {
        let p = table.column(k);
        let r = returns.column(k);
        for t in 0..r.len() {
            let rebuilt = p[t] * (1.0 + r[t]);
            assert!(((rebuilt - p[t + 1]) / p[t + 1]).abs() <= 1e-12);
        }
    }
}

#[test]
fn loading_is_deterministic() {
    let (dir, tickers) = fixture();
    let (s, e) = range();
    let a: PriceTable<f64> = load_price_table(dir.path(), &tickers, s, e).unwrap();
    let b: PriceTable<f64> = load_price_table(dir.path(), &tickers, s, e).unwrap();
    let bits = |t: &PriceTable<f64>| t.rows().iter().flatten().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(a.dates(), b.dates());
    assert_eq!(bits(&a), bits(&b));

    let single: PriceTable<f32> = load_price_table(dir.path(), &tickers, s, e).unwrap();
    assert_eq!(single.dates(), a.dates());
}
