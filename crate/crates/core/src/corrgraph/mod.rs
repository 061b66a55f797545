//! Correlation matrices, threshold graphs and maximum-clique portfolios.

mod clique;

pub use clique::{maximum_cliques, VertexSet};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ingest::{ReturnTable, Ticker};
use crate::scalar::Scalar;
use crate::stats::{pearson_named, SampleStats};

/// Scores of competing maximum cliques closer than this are treated as equal.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-9;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Symmetric correlation matrix with a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    tickers: Vec<Ticker>,
    values: Vec<Vec<T>>,
}

impl<T: Scalar> CorrelationMatrix<T> {
    /// Validates a square, symmetric matrix with ones on the diagonal and
    /// off-diagonal entries in `[-1, 1]`.
    pub fn from_values(tickers: Vec<Ticker>, values: Vec<Vec<T>>) -> Result<Self> {
        let n = tickers.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("no tickers".into()));
        }
        if values.len() != n || values.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMatrix(format!("expected a {n}x{n} matrix")));
        }
        let tol = T::of(SYMMETRY_TOLERANCE);
        for (i, row) in values.iter().enumerate() {
            if row[i] != T::one() {
                return Err(Error::InvalidMatrix(format!("diagonal entry {i} is not 1")));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v.abs() > T::one() {
                    return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) outside [-1, 1]")));
                }
                if (v - values[j][i]).abs() > tol {
                    return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(CorrelationMatrix { tickers, values })
    }

    pub fn tickers(&self) -> &[Ticker] {
        &self.tickers
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i][j]
    }

    pub fn len(&self) -> usize {
        self.tickers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tickers.is_empty()
    }

    pub fn index_of(&self, ticker: &Ticker) -> Result<usize> {
        self.tickers
            .iter()
            .position(|t| t == ticker)
            .ok_or_else(|| Error::UnknownTicker(ticker.to_string()))
    }

    /// Upper-triangle entries, row by row.
    pub fn off_diagonal(&self) -> Vec<T> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.values[i][j])
            .collect()
    }
}

/// Pairwise Pearson correlations of the return columns.
pub fn correlation_matrix<T: Scalar>(returns: &ReturnTable<T>) -> Result<CorrelationMatrix<T>> {
    if returns.len() < 2 {
        return Err(Error::TooFewValues {
            found: returns.len(),
            required: 2,
        });
    }
    let columns: Vec<Vec<T>> = (0..returns.tickers().len()).map(|k| returns.column(k)).collect();
    let names: Vec<&str> = returns.tickers().iter().map(Ticker::as_str).collect();
    if let Some(k) = columns.iter().position(|c| c.windows(2).all(|w| w[0] == w[1])) {
        return Err(Error::ZeroVariance(names[k].to_string()));
    }

    let n = columns.len();
    let mut values = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        values[i][i] = T::one();
        for j in i + 1..n {
            let r = pearson_named(&columns[i], &columns[j], names[i], names[j])?;
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        tickers: returns.tickers().to_vec(),
        values,
    })
}

/// Statistics over the `n(n-1)/2` distinct off-diagonal correlations.
pub fn offdiagonal_stats<T: Scalar>(m: &CorrelationMatrix<T>) -> Result<SampleStats<T>> {
    if m.len() < 2 {
        return Err(Error::TooFewValues {
            found: m.len(),
            required: 2,
        });
    }
    SampleStats::from_slice(&m.off_diagonal())
}

/// Whether edges join weakly or strongly correlated stocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionMode {
    /// Edge iff `|corr| < threshold`.
    Diversified,
    /// Edge iff `|corr| > threshold`.
    Undiversified,
}

impl SelectionMode {
    fn admits<T: Scalar>(self, corr: T, threshold: T) -> bool {
        match self {
            SelectionMode::Diversified => corr.abs() < threshold,
            SelectionMode::Undiversified => corr.abs() > threshold,
        }
    }
}

/// One standard deviation below (diversified) or above (undiversified) the
/// mean correlation, clamped to `[0, 1]`.
pub fn suggest_threshold<T: Scalar>(stats: &SampleStats<T>, mode: SelectionMode) -> Result<T> {
    let stddev = stats.stddev.ok_or(Error::TooFewValues {
        found: stats.count,
        required: 2,
    })?;
    let raw = match mode {
        SelectionMode::Diversified => stats.mean - stddev,
        SelectionMode::Undiversified => stats.mean + stddev,
    };
    Ok(raw.max(T::zero()).min(T::one()))
}

/// Undirected graph over the matrix tickers, thresholded on `|corr|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGraph<T> {
    tickers: Vec<Ticker>,
    neighbors: Vec<VertexSet>,
    mode: SelectionMode,
    threshold: T,
}

impl<T: Scalar> CorrelationGraph<T> {
    pub fn tickers(&self) -> &[Ticker] {
        &self.tickers
    }

    pub fn mode(&self) -> SelectionMode {
        self.mode
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].contains(j)
    }

    pub fn neighbors(&self) -> &[VertexSet] {
        &self.neighbors
    }

    /// Edges as index pairs `(i, j)` with `i < j`, in row order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.tickers.len();
        (0..n)
            .flat_map(|i| self.neighbors[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    /// 0/1 adjacency matrix with a zero diagonal.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.tickers.len();
        (0..n)
            .map(|i| (0..n).map(|j| u8::from(self.has_edge(i, j))).collect())
            .collect()
    }
}

pub fn build_graph<T: Scalar>(
    m: &CorrelationMatrix<T>,
    mode: SelectionMode,
    threshold: T,
) -> Result<CorrelationGraph<T>> {
    if !(threshold >= T::zero() && threshold <= T::one()) {
        return Err(Error::ThresholdOutOfRange(threshold.to_f64_lossy()));
    }
    let n = m.len();
    let mut neighbors = vec![VertexSet::empty(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if mode.admits(m.get(i, j), threshold) {
                neighbors[i].insert(j);
                neighbors[j].insert(i);
            }
        }
    }
    Ok(CorrelationGraph {
        tickers: m.tickers().to_vec(),
        neighbors,
        mode,
        threshold,
    })
}

/// Every clique of maximum size in a correlation graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueReport {
    pub max_size: usize,
    /// Each clique sorted by symbol; cliques in lexicographic order.
    pub max_cliques: Vec<Vec<Ticker>>,
}

pub fn max_cliques<T: Scalar>(g: &CorrelationGraph<T>) -> CliqueReport {
    let (max_size, cliques) = maximum_cliques(g.neighbors());
    let mut max_cliques: Vec<Vec<Ticker>> = cliques
        .into_iter()
        .map(|c| {
            let mut members: Vec<Ticker> = c.into_iter().map(|v| g.tickers[v].clone()).collect();
            members.sort();
            members
        })
        .collect();
    max_cliques.sort();
    CliqueReport { max_size, max_cliques }
}

/// The tie-broken portfolio drawn from a [`CliqueReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    pub tickers: Vec<Ticker>,
    /// Mean absolute pairwise correlation of the members.
    pub score: T,
}

/// Mean absolute pairwise correlation of a ticker set. Terms are summed in
/// ascending order so the score does not depend on member order.
pub fn mean_abs_correlation<T: Scalar>(m: &CorrelationMatrix<T>, members: &[Ticker]) -> Result<T> {
    let idx = members.iter().map(|t| m.index_of(t)).collect::<Result<Vec<_>>>()?;
    let mut terms: Vec<T> = idx
        .iter()
        .enumerate()
        .flat_map(|(a, &i)| idx[a + 1..].iter().map(move |&j| (i, j)))
        .map(|(i, j)| m.get(i, j).abs())
        .collect();
    if terms.is_empty() {
        return Err(Error::NoClique);
    }
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let count = T::of_usize(terms.len());
    Ok(terms.into_iter().sum::<T>() / count)
}

/// Picks the maximum clique with the lowest (diversified) or highest
/// (undiversified) mean absolute correlation; remaining ties go to the
/// lexicographically smallest ticker list.
pub fn select_portfolio<T: Scalar>(
    report: &CliqueReport,
    m: &CorrelationMatrix<T>,
    mode: SelectionMode,
) -> Result<Selection<T>> {
    if report.max_size < 2 {
        return Err(Error::NoClique);
    }
    let tol = T::of(SCORE_TIE_TOLERANCE);
    let mut best: Option<Selection<T>> = None;
    for clique in &report.max_cliques {
        let mut tickers = clique.clone();
        tickers.sort();
        let score = mean_abs_correlation(m, &tickers)?;
        let better = match &best {
            None => true,
            Some(b) => {
                let improves = match mode {
                    SelectionMode::Diversified => score < b.score - tol,
                    SelectionMode::Undiversified => score > b.score + tol,
                };
                let ties = (score - b.score).abs() <= tol;
                improves || (ties && tickers < b.tickers)
            }
        };
        if better {
            best = Some(Selection { tickers, score });
        }
    }
    best.ok_or(Error::NoClique)
}
