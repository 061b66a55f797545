//! Regenerates the CSV fixtures under `fixtures/`.
//!
//! ```text
//! cargo run -p corrgraph-cli --example make_fixtures -- fixtures
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const HEADER: &str = "Date,Open,High,Low,Close,Adj Close,Volume";

fn weekdays(from: NaiveDate, count: usize) -> Vec<NaiveDate> {
    from.iter_days()
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .take(count)
        .collect()
}

fn weekdays_until(from: NaiveDate, to: NaiveDate) -> Vec<NaiveDate> {
    from.iter_days()
        .take_while(|d| *d <= to)
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .collect()
}

/// Writes one file; `None` prices become `null` rows.
fn write_csv(dir: &Path, symbol: &str, dates: &[NaiveDate], adj: &[Option<f64>]) {
    let mut body = String::from(HEADER);
    body.push('\n');
    for (date, price) in dates.iter().zip(adj) {
        match price {
            Some(p) => {
                let close = (p * 1.01 * 100.0).round() / 100.0;
                let _ = writeln!(body, "{date},{close},{close},{close},{close},{p},1000000");
            }
            None => {
                let _ = writeln!(body, "{date},null,null,null,null,null,null");
            }
        }
    }
    fs::write(dir.join(format!("{symbol}.csv")), body).unwrap();
}

fn compound(start: f64, returns: &[f64]) -> Vec<f64> {
    let mut price = start;
    let mut out = vec![price];
    for r in returns {
        price *= 1.0 + r;
        out.push(price);
    }
    out
}

fn cholesky(c: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = c.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][j] = (c[i][i] - s).sqrt();
            } else {
                l[i][j] = (c[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Centred, orthonormal columns (modified Gram–Schmidt).
fn orthonormal_columns(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for _ in 0..cols {
        let mut v: Vec<f64> = (0..rows).map(|_| rng.sample(StandardNormal)).collect();
        let mean = v.iter().sum::<f64>() / rows as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        for u in &q {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v);
    }
    q
}

/// Five stocks whose daily returns have exactly the worked-example
/// correlation matrix.
fn example5(dir: &Path) {
    let c = vec![
        vec![1.0, 0.2, 0.4, 0.4, 0.1],
        vec![0.2, 1.0, 0.2, 0.3, 0.2],
        vec![0.4, 0.2, 1.0, 0.6, 0.1],
        vec![0.4, 0.3, 0.6, 1.0, 0.1],
        vec![0.1, 0.2, 0.1, 0.1, 1.0],
    ];
    let days = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let q = orthonormal_columns(&mut rng, days, 5);
    let l = cholesky(&c);
    let dates = weekdays(NaiveDate::from_ymd_opt(2020, 1, 2).unwrap(), days + 1);
    for (k, symbol) in ["A", "B", "C", "D", "E"].iter().enumerate() {
        let returns: Vec<f64> = (0..days)
            .map(|t| {
                let x: f64 = (0..=k).map(|m| l[k][m] * q[m][t]).sum();
                0.0005 + 0.1 * x
            })
            .collect();
        let prices = compound(50.0 + 10.0 * k as f64, &returns);
        write_csv(dir, symbol, &dates, &prices.into_iter().map(Some).collect::<Vec<_>>());
    }
}

/// Ten stocks over two years driven by two sector factors, plus price- and
/// cap-weighted style benchmarks. `JJJ` repeats `AAA`'s moves three days
/// later; `HHH` lists late and `III` has gaps.
fn synthetic10(dir: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(2019);
    let dates = weekdays_until(
        NaiveDate::from_ymd_opt(2019, 1, 2).unwrap(),
        NaiveDate::from_ymd_opt(2020, 12, 31).unwrap(),
    );
    let n = dates.len();
    let market: Vec<f64> = (0..n).map(|_| 0.01 * rng.sample::<f64, _>(StandardNormal)).collect();
    let sector: Vec<Vec<f64>> = (0..2)
        .map(|_| (0..n).map(|_| 0.008 * rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();

    let profiles: [(&str, f64, usize, f64); 9] = [
        ("AAA", 0.9, 0, 120.0),
        ("BBB", 0.8, 0, 45.0),
        ("CCC", 0.3, 0, 80.0),
        ("DDD", 1.1, 1, 30.0),
        ("EEE", 0.6, 1, 210.0),
        ("FFF", 0.2, 1, 15.0),
        ("GGG", 0.0, 0, 60.0),
        ("HHH", 0.5, 1, 95.0),
        ("III", 0.7, 0, 150.0),
    ];
    let mut all_returns = Vec::new();
    for &(symbol, beta, s, start) in &profiles {
        let idio = if symbol == "GGG" { 0.02 } else { 0.012 };
        let r: Vec<f64> = (1..n)
            .map(|t| 0.0003 + beta * market[t] + sector[s][t] + idio * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let mut prices: Vec<Option<f64>> = compound(start, &r).into_iter().map(Some).collect();
        match symbol {
            "HHH" => prices.iter_mut().take(25).for_each(|p| *p = None),
            "III" => {
                for t in [40, 41, 200, 333] {
                    prices[t] = None;
                }
            }
            _ => {}
        }
        write_csv(dir, symbol, &dates, &prices);
        all_returns.push((symbol, r));
    }

    let lead = &all_returns[0].1;
    let jjj: Vec<f64> = (0..n - 1)
        .map(|t| {
            let copied = if t >= 3 { lead[t - 3] } else { 0.0 };
            copied + 0.002 * rng.sample::<f64, _>(StandardNormal)
        })
        .collect();
    write_csv(
        dir,
        "JJJ",
        &dates,
        &compound(70.0, &jjj).into_iter().map(Some).collect::<Vec<_>>(),
    );

    let spy: Vec<f64> = (1..n).map(|t| 0.0004 + market[t]).collect();
    write_csv(
        dir,
        "SPY",
        &dates,
        &compound(250.0, &spy).into_iter().map(Some).collect::<Vec<_>>(),
    );
    let dji: Vec<f64> = (1..n)
        .map(|t| 0.0002 + 0.95 * market[t] + 0.003 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    write_csv(
        dir,
        "^DJI",
        &dates,
        &compound(23000.0, &dji).into_iter().map(Some).collect::<Vec<_>>(),
    );
}

fn signal_hand(dir: &Path) {
    let dates = weekdays(NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(), 4);
    let wrap = |v: &[f64]| v.iter().copied().map(Some).collect::<Vec<_>>();
    write_csv(dir, "TGT", &dates, &wrap(&[100.0, 102.0, 101.0, 105.0]));
    write_csv(dir, "IND", &dates, &wrap(&[10.0, 11.0, 10.0, 12.0]));
}

fn main() {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    for (name, build) in [
        ("example5", example5 as fn(&Path)),
        ("synthetic10", synthetic10),
        ("signal_hand", signal_hand),
    ] {
        let dir = root.join(name);
        fs::create_dir_all(&dir).unwrap();
        build(&dir);
        println!("wrote {}", dir.display());
    }
}
