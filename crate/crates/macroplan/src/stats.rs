//! Pearson and Spearman correlation.
//!
//! Both return 0.0 when either input has zero variance. Spearman ranks ties
//! by their average position.

use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("inputs have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("inputs are empty")]
    Empty,
}

fn check(xs: &[f64], ys: &[f64]) -> Result<(), StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return Err(StatsError::Empty);
    }
    Ok(())
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    check(xs, ys)?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok(ratio(sxy, sxx, syy))
}

fn ratio(sxy: f64, sxx: f64, syy: f64) -> f64 {
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// 1-based ranks, ties sharing the mean of the positions they span.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    check(xs, ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Counts of integer `(x, y)` observations, for correlating millions of
/// pairs drawn from small value ranges without storing them.
#[derive(Clone, Debug, Default)]
pub struct JointCounts {
    counts: BTreeMap<(u32, u32), u64>,
}

impl JointCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: u32, y: u32) {
        self.add_many(x, y, 1);
    }

    pub fn add_many(&mut self, x: u32, y: u32, count: u64) {
        if count > 0 {
            *self.counts.entry((x, y)).or_insert(0) += count;
        }
    }

    pub fn merge(&mut self, other: &JointCounts) {
        for (&(x, y), &c) in &other.counts {
            self.add_many(x, y, c);
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn pearson(&self) -> f64 {
        self.weighted_pearson(|x| x as f64, |y| y as f64)
    }

    pub fn spearman(&self) -> f64 {
        let rx = self.marginal_ranks(|&(x, _)| x);
        let ry = self.marginal_ranks(|&(_, y)| y);
        self.weighted_pearson(|x| rx[&x], |y| ry[&y])
    }

    /// Average rank of each distinct value of one coordinate.
    fn marginal_ranks(&self, key: impl Fn(&(u32, u32)) -> u32) -> BTreeMap<u32, f64> {
        let mut marginal: BTreeMap<u32, u64> = BTreeMap::new();
        for (k, &c) in &self.counts {
            *marginal.entry(key(k)).or_insert(0) += c;
        }
        let mut below = 0u64;
        marginal
            .into_iter()
            .map(|(v, c)| {
                let rank = below as f64 + (c as f64 + 1.0) / 2.0;
                below += c;
                (v, rank)
            })
            .collect()
    }

    fn weighted_pearson(&self, fx: impl Fn(u32) -> f64, fy: impl Fn(u32) -> f64) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let (mut mx, mut my) = (0.0, 0.0);
        for (&(x, y), &c) in &self.counts {
            mx += c as f64 * fx(x);
            my += c as f64 * fy(y);
        }
        mx /= n;
        my /= n;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (&(x, y), &c) in &self.counts {
            let (dx, dy) = (fx(x) - mx, fy(y) - my);
            let c = c as f64;
            sxy += c * dx * dy;
            sxx += c * dx * dx;
            syy += c * dy * dy;
        }
        ratio(sxy, sxx, syy)
    }
}

/// Median of a non-empty sample (mean of the middle two for even sizes).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs() {
        let xs = [1.0, 2.0, 3.0];
        assert_eq!(pearson(&xs, &xs).unwrap(), 1.0);
        assert_eq!(spearman(&xs, &xs).unwrap(), 1.0);
    }

    #[test]
    fn constant_input_gives_zero() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[5.0; 3]).unwrap(), 0.0);
        assert_eq!(spearman(&[5.0; 3], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        assert_eq!(pearson(&[1.0], &[1.0, 2.0]), Err(StatsError::LengthMismatch(1, 2)));
        assert_eq!(spearman(&[], &[]), Err(StatsError::Empty));
    }

    #[test]
    fn spearman_without_ties_matches_rank_difference_formula() {
        // 1 - 6 Σd² / (n (n² - 1)) holds exactly when there are no ties
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [1.0, 3.0, 2.0, 4.0];
        let d2: f64 = average_ranks(&xs)
            .iter()
            .zip(average_ranks(&ys))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let n = 4.0;
        let expected = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
        assert!((spearman(&xs, &ys).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.8).abs() < 1e-12);
    }

    #[test]
    fn tied_ranks_are_averaged() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn joint_counts_agree_with_slices() {
        let pairs: Vec<(u32, u32)> = (0..500u32)
            .map(|i| ((i * 7 + 3) % 11, (i * i + 5 * i) % 9))
            .chain((0..200).map(|i| (i % 5, i % 5 + i % 3)))
            .collect();
        let mut jc = JointCounts::new();
        for &(x, y) in &pairs {
            jc.add(x, y);
        }
        let xs: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        assert!((jc.pearson() - pearson(&xs, &ys).unwrap()).abs() < 1e-10);
        assert!((jc.spearman() - spearman(&xs, &ys).unwrap()).abs() < 1e-10);
        assert_eq!(jc.total(), 700);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
