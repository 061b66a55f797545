//! Brute-force reference implementations, independent of the library code
//! paths they check.

#![allow(dead_code)]

/// Pearson correlation through raw moment sums,
/// `(Σxy - n·x̄·ȳ) / sqrt((Σx² - n·x̄²)(Σy² - n·ȳ²))`, accumulated with
/// compensated summation.
pub fn ppmc(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx = kahan(x.iter().copied());
    let sy = kahan(y.iter().copied());
    let sxx = kahan(x.iter().map(|v| v * v));
    let syy = kahan(y.iter().map(|v| v * v));
    let sxy = kahan(x.iter().zip(y).map(|(a, b)| a * b));
    let num = sxy - sx * sy / n;
    let den = ((sxx - sx * sx / n) * (syy - sy * sy / n)).sqrt();
    num / den
}

fn kahan(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

pub fn naive_mean(xs: &[f64]) -> f64 {
    let mut total = 0.0;
    for x in xs {
        total += x;
    }
    total / xs.len() as f64
}

/// Median by repeatedly removing the current minimum and maximum.
pub fn naive_median(xs: &[f64]) -> f64 {
    let mut rest = xs.to_vec();
    while rest.len() > 2 {
        let lo = (0..rest.len())
            .min_by(|&a, &b| rest[a].partial_cmp(&rest[b]).unwrap())
            .unwrap();
        rest.remove(lo);
        let hi = (0..rest.len())
            .max_by(|&a, &b| rest[a].partial_cmp(&rest[b]).unwrap())
            .unwrap();
        rest.remove(hi);
    }
    if rest.len() == 1 {
        rest[0]
    } else {
        (rest[0] + rest[1]) / 2.0
    }
}

pub fn naive_stddev(xs: &[f64]) -> f64 {
    let m = naive_mean(xs);
    let mut ss = 0.0;
    for x in xs {
        ss += (x - m).powi(2);
    }
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

/// Maximum clique size and all maximum cliques by testing every vertex subset.
pub fn brute_force_max_cliques(n: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> (usize, Vec<Vec<usize>>) {
    assert!(n <= 20);
    let mut best = 0;
    let mut cliques = Vec::new();
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        let complete = members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| adjacent(a, b)));
        if !complete {
            continue;
        }
        if members.len() > best {
            best = members.len();
            cliques.clear();
        }
        if members.len() == best {
            cliques.push(members);
        }
    }
    cliques.sort();
    (best, cliques)
}
