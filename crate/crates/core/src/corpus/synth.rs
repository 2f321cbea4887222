use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ArticleRecord, RawEdge};
use crate::error::{Error, Result};

/// Parameters of a synthetic citation corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_articles: usize,
    /// Inclusive publication-year interval.
    pub year_range: (i32, i32),
    pub n_subjects: usize,
    pub mean_out_degree: f64,
    /// Preferential-attachment strength: targets are drawn with weight
    /// `(in_degree + 1) ^ attachment_exponent`.
    pub attachment_exponent: f64,
    pub seed: u64,
    /// Attachment-weight multiplier for articles of subject 0.
    #[serde(default = "one")]
    pub hot_subject_boost: f64,
    /// Journals per subject; 0 leaves the journal column empty.
    #[serde(default = "four")]
    pub journals_per_subject: usize,
}

fn one() -> f64 {
    1.0
}

fn four() -> usize {
    4
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_articles: 10_000,
            year_range: (1981, 2020),
            n_subjects: 8,
            mean_out_degree: 10.0,
            attachment_exponent: 1.0,
            seed: 0,
            hot_subject_boost: 1.0,
            journals_per_subject: 4,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_articles == 0 {
            return Err(Error::invalid("n_articles must be positive"));
        }
        if self.n_articles > u32::MAX as usize {
            return Err(Error::invalid("n_articles exceeds u32 node capacity"));
        }
        if self.n_subjects == 0 {
            return Err(Error::invalid("n_subjects must be positive"));
        }
        if self.year_range.0 > self.year_range.1 {
            return Err(Error::invalid(format!(
                "year range {:?} is empty",
                self.year_range
            )));
        }
        if !(self.mean_out_degree > 0.0 && self.mean_out_degree < self.n_articles as f64) {
            return Err(Error::invalid(format!(
                "mean_out_degree {} must lie in (0, n_articles)",
                self.mean_out_degree
            )));
        }
        if !(self.attachment_exponent >= 0.0 && self.attachment_exponent.is_finite()) {
            return Err(Error::invalid("attachment_exponent must be finite and >= 0"));
        }
        if !(self.hot_subject_boost > 0.0 && self.hot_subject_boost.is_finite()) {
            return Err(Error::invalid("hot_subject_boost must be finite and > 0"));
        }
        Ok(())
    }
}

/// Generated articles plus citations as `(citing, cited)` indices into
/// `articles`.
///
/// Articles are in generation order, which is also ascending year order and
/// ascending id order. Every article may only cite articles generated
/// before it, so the link set is acyclic.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub articles: Vec<ArticleRecord>,
    pub links: Vec<(u32, u32)>,
}

impl SyntheticCorpus {
    pub fn edges(&self) -> Vec<RawEdge> {
        self.links
            .iter()
            .map(|&(c, t)| {
                RawEdge::new(
                    self.articles[c as usize].article_id.clone(),
                    self.articles[t as usize].article_id.clone(),
                )
            })
            .collect()
    }
}

/// Binary indexed tree over non-negative sampling weights.
struct WeightTree {
    tree: Vec<f64>,
    leaf: Vec<f64>,
}

impl WeightTree {
    fn new(n: usize) -> Self {
        WeightTree {
            tree: vec![0.0; n + 1],
            leaf: vec![0.0; n],
        }
    }

    fn set(&mut self, idx: usize, weight: f64) {
        let delta = weight - self.leaf[idx];
        self.leaf[idx] = weight;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self, upto: usize) -> f64 {
        let mut i = upto;
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}

/// Generates a heavy-tailed temporal citation corpus from `spec`.
///
/// Years and subjects are uniform. Articles are processed in year order and
/// each one references up to its drawn out-degree distinct earlier articles,
/// sampled with probability proportional to
/// `boost(subject) * (in_degree + 1) ^ attachment_exponent`. The declared
/// reference count is the drawn out-degree, which can exceed the realized
/// one for the first few articles. Output is a pure function of `spec`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let n = spec.n_articles;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (y0, y1) = spec.year_range;

    let mut years: Vec<i32> = (0..n).map(|_| rng.gen_range(y0..=y1)).collect();
    years.sort_unstable();

    let width = n.to_string().len().max(6);
    let base_degree = spec.mean_out_degree.floor();
    let frac_degree = spec.mean_out_degree - base_degree;

    let mut articles = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    let mut boosts = Vec::with_capacity(n);
    for (k, &year) in years.iter().enumerate() {
        let subject = rng.gen_range(0..spec.n_subjects);
        let journal_id = (spec.journals_per_subject > 0).then(|| {
            let j = rng.gen_range(0..spec.journals_per_subject);
            format!("J{subject:03}-{j}")
        });
        let u: f64 = rng.gen();
        let n_coauthors = 1 + (-(1.0 - u).ln() * 2.5).floor() as u32;
        let m = base_degree as u32 + u32::from(rng.gen_bool(frac_degree));
        degrees.push(m);
        boosts.push(if subject == 0 {
            spec.hot_subject_boost
        } else {
            1.0
        });
        articles.push(ArticleRecord {
            article_id: format!("A{k:0width$}"),
            year,
            subjects: vec![format!("S{subject:03}")],
            journal_id,
            n_coauthors,
            n_references_declared: m,
        });
    }

    let gamma = spec.attachment_exponent;
    let weight = |indeg: u32, boost: f64| boost * (indeg as f64 + 1.0).powf(gamma);

    let mut tree = WeightTree::new(n);
    let mut in_degree = vec![0u32; n];
    let mut links = Vec::with_capacity((spec.mean_out_degree * n as f64) as usize);
    let mut picked: Vec<usize> = Vec::new();

    for k in 0..n {
        let want = (degrees[k] as usize).min(k);
        picked.clear();
        if want == k {
            picked.extend(0..k);
        } else {
            while picked.len() < want {
                let total = tree.total(k);
                let t = tree.find(rng.gen::<f64>() * total);
                if t >= k || tree.leaf[t] == 0.0 {
                    continue;
                }
                picked.push(t);
                tree.set(t, 0.0);
            }
        }
        for &t in &picked {
            in_degree[t] += 1;
            tree.set(t, weight(in_degree[t], boosts[t]));
            links.push((k as u32, t as u32));
        }
        tree.set(k, weight(0, boosts[k]));
    }

    Ok(SyntheticCorpus { articles, links })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            n_articles: 2_000,
            year_range: (1990, 1999),
            n_subjects: 5,
            mean_out_degree: 4.5,
            attachment_exponent: 1.0,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let a = generate_synthetic(&small(7)).unwrap();
        let b = generate_synthetic(&small(7)).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&small(8)).unwrap();
        assert_ne!(a.links, c.links);
    }

    #[test]
    fn edges_point_backwards_in_time_and_are_distinct() {
        let corpus = generate_synthetic(&small(1)).unwrap();
        let mut seen = std::collections::HashSet::new();
        for &(c, t) in &corpus.links {
            assert!(t < c);
            assert!(corpus.articles[c as usize].year >= corpus.articles[t as usize].year);
            assert!(seen.insert((c, t)));
        }
    }

    #[test]
    fn ids_sort_in_generation_order() {
        let corpus = generate_synthetic(&small(3)).unwrap();
        assert!(corpus
            .articles
            .windows(2)
            .all(|w| w[0].article_id < w[1].article_id));
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut s = small(0);
        s.n_articles = 0;
        assert!(generate_synthetic(&s).is_err());
        let mut s = small(0);
        s.mean_out_degree = 2_000.0;
        assert!(generate_synthetic(&s).is_err());
        let mut s = small(0);
        s.attachment_exponent = -1.0;
        assert!(generate_synthetic(&s).is_err());
    }

    #[test]
    fn weight_tree_prefix_search() {
        let mut t = WeightTree::new(5);
        for (i, w) in [1.0, 0.0, 2.0, 3.0, 0.0].into_iter().enumerate() {
            t.set(i, w);
        }
        assert_eq!(t.total(5), 6.0);
        assert_eq!(t.find(0.5), 0);
        assert_eq!(t.find(1.0), 2);
        assert_eq!(t.find(2.9), 2);
        assert_eq!(t.find(3.0), 3);
        assert_eq!(t.find(5.99), 3);
    }
}
