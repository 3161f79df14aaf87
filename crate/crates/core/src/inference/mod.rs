//! Rule-grid fuzzy models and center-average inference.
//!
//! A [`FuzzyModel`] holds one partition per input, an output partition and a
//! dense grid with one cell per antecedent combination. Cells are stored
//! row-major with the first input as the most significant axis, so for a
//! 2-input model cell `(i, j)` lives at `i * n_y + j`.
//!
//! Antecedents combine with the product t-norm and the model output is the
//! activation-weighted average of the populated active cells. When every
//! active cell is empty the query is a coverage gap and [`FuzzyModel::infer`]
//! returns [`Error::NoActiveRule`].

mod text;

pub use text::{parse_model, read_model, save_model, write_model, Metadata};

use crate::error::{Error, Result};
use crate::membership::{MfKind, Partition};

/// A populated cell of the rule grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Vec<usize>,
    pub conclusion: f64,
    /// Implication degree of the example that produced the rule; 1.0 for
    /// averaged or tuned conclusions.
    pub degree: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyModel {
    inputs: Vec<Partition>,
    output: Partition,
    cells: Vec<Option<Rule>>,
}

/// Cell-wise comparison of two rule grids, see [`rule_diff`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleDiff {
    pub unchanged: usize,
    pub changed: usize,
    pub only_a: usize,
    pub only_b: usize,
}

impl RuleDiff {
    /// Rules that differ in any way: `changed + only_a + only_b`.
    pub fn changes(&self) -> usize {
        self.changed + self.only_a + self.only_b
    }
}

impl FuzzyModel {
    /// A model whose cells are all empty.
    pub fn empty(inputs: Vec<Partition>, output: Partition) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::InvalidConfig(
                "a model needs at least one input".into(),
            ));
        }
        let size = inputs.iter().map(Partition::len).product();
        Ok(Self {
            inputs,
            output,
            cells: vec![None; size],
        })
    }

    /// A fully populated model with `conclusion(centers)` in every cell.
    pub fn from_fn(
        inputs: Vec<Partition>,
        output: Partition,
        mut conclusion: impl FnMut(&[f64]) -> f64,
    ) -> Result<Self> {
        let mut model = Self::empty(inputs, output)?;
        for flat in 0..model.cells.len() {
            let antecedent = model.antecedent_of(flat);
            let centers: Vec<f64> = antecedent
                .iter()
                .zip(&model.inputs)
                .map(|(&i, p)| p.center(i))
                .collect();
            let c = conclusion(&centers);
            model.cells[flat] = Some(Rule {
                antecedent,
                conclusion: c,
                degree: 1.0,
            });
        }
        Ok(model)
    }

    pub fn inputs(&self) -> &[Partition] {
        &self.inputs
    }

    pub fn output(&self) -> &Partition {
        &self.output
    }

    pub fn dims(&self) -> usize {
        self.inputs.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.inputs.iter().map(Partition::len).collect()
    }

    pub fn cells(&self) -> &[Option<Rule>] {
        &self.cells
    }

    pub fn cell(&self, flat: usize) -> Option<&Rule> {
        self.cells[flat].as_ref()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.cells.iter().flatten()
    }

    pub fn rule_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn empty_count(&self) -> usize {
        self.cells.len() - self.rule_count()
    }

    /// True when every input partition uses `kind`.
    pub fn inputs_are(&self, kind: MfKind) -> bool {
        self.inputs.iter().all(|p| p.kind() == kind)
    }

    /// Row-major flat index of an antecedent tuple.
    pub fn index_of(&self, antecedent: &[usize]) -> usize {
        debug_assert_eq!(antecedent.len(), self.inputs.len());
        antecedent
            .iter()
            .zip(&self.inputs)
            .fold(0, |acc, (&i, p)| acc * p.len() + i)
    }

    pub fn antecedent_of(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.inputs.len()];
        for (slot, p) in out.iter_mut().zip(&self.inputs).rev() {
            *slot = flat % p.len();
            flat /= p.len();
        }
        out
    }

    /// Stores a rule in the cell named by its antecedent.
    pub fn set_rule(&mut self, rule: Rule) -> Result<()> {
        if rule.antecedent.len() != self.inputs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs.len(),
                got: rule.antecedent.len(),
            });
        }
        for (&i, p) in rule.antecedent.iter().zip(&self.inputs) {
            if i >= p.len() {
                return Err(Error::InvalidConfig(format!(
                    "antecedent index {i} out of bounds for {} sets",
                    p.len()
                )));
            }
        }
        let flat = self.index_of(&rule.antecedent);
        self.cells[flat] = Some(rule);
        Ok(())
    }

    pub fn clear_cell(&mut self, flat: usize) {
        self.cells[flat] = None;
    }

    /// Overwrites the conclusion of a populated cell.
    pub(crate) fn set_conclusion(&mut self, flat: usize, value: f64) {
        if let Some(rule) = self.cells[flat].as_mut() {
            rule.conclusion = value;
        }
    }

    fn check_dims(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.inputs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs.len(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Cells with nonzero product-t-norm weight at `x`, populated or not.
    ///
    /// Each coordinate is clamped to its partition range. Weights are
    /// multiplied in input order starting from 1.0.
    pub fn activation(&self, x: &[f64]) -> Result<Vec<(usize, f64)>> {
        self.check_dims(x)?;
        let mut acc: Vec<(usize, f64)> = vec![(0, 1.0)];
        for (p, &xi) in self.inputs.iter().zip(x) {
            let axis = p.active(xi);
            let mut next = Vec::with_capacity(acc.len() * axis.len());
            for &(flat, w) in &acc {
                for &(i, mu) in &axis {
                    next.push((flat * p.len() + i, w * mu));
                }
            }
            acc = next;
        }
        acc.retain(|&(_, w)| w > 0.0);
        Ok(acc)
    }

    /// Active populated cells with their weights and the weight total.
    fn firing(&self, x: &[f64]) -> Result<(Vec<(usize, f64)>, f64)> {
        let mut fired = self.activation(x)?;
        fired.retain(|&(flat, _)| self.cells[flat].is_some());
        let total: f64 = fired.iter().map(|&(_, w)| w).sum();
        if fired.is_empty() || total <= 0.0 {
            return Err(Error::NoActiveRule);
        }
        Ok((fired, total))
    }

    /// Center-average output at `x`.
    pub fn infer(&self, x: &[f64]) -> Result<f64> {
        let (fired, total) = self.firing(x)?;
        let num: f64 = fired
            .iter()
            .map(|&(flat, w)| w * self.cells[flat].as_ref().map_or(0.0, |r| r.conclusion))
            .sum();
        Ok(num / total)
    }

    /// Populated active cells with their normalized weights `w_r / sum(w)`.
    pub fn normalized_firing(&self, x: &[f64]) -> Result<Vec<(usize, f64)>> {
        let (fired, total) = self.firing(x)?;
        Ok(fired
            .into_iter()
            .map(|(flat, w)| (flat, w / total))
            .collect())
    }
}

/// Compares two models cell by cell.
///
/// A cell counts as `changed` when both models populate it and the
/// conclusions select different sets of `a`'s output partition.
pub fn rule_diff(a: &FuzzyModel, b: &FuzzyModel) -> Result<RuleDiff> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let out = a.output();
    let mut diff = RuleDiff::default();
    for (ca, cb) in a.cells.iter().zip(&b.cells) {
        match (ca, cb) {
            (Some(ra), Some(rb)) => {
                if out.best_set(ra.conclusion) == out.best_set(rb.conclusion) {
                    diff.unchanged += 1;
                } else {
                    diff.changed += 1;
                }
            }
            (Some(_), None) => diff.only_a += 1,
            (None, Some(_)) => diff.only_b += 1,
            (None, None) => {}
        }
    }
    Ok(diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::DEFAULT_WIDTH_FACTOR;
    use proptest::prelude::*;

    fn tri(lo: f64, hi: f64, n: usize) -> Partition {
        Partition::uniform(lo, hi, n, MfKind::Triangular, DEFAULT_WIDTH_FACTOR).unwrap()
    }

    fn plane_model(n: usize) -> FuzzyModel {
        FuzzyModel::from_fn(
            vec![tri(0.0, 10.0, n), tri(0.0, 10.0, n)],
            tri(0.0, 20.0, 13),
            |c| c[0] + c[1],
        )
        .unwrap()
    }

    #[test]
    fn flat_indexing_round_trips() {
        let m =
            FuzzyModel::empty(vec![tri(0.0, 1.0, 3), tri(0.0, 1.0, 4)], tri(0.0, 1.0, 2)).unwrap();
        assert_eq!(m.index_of(&[1, 2]), 6);
        for flat in 0..12 {
            assert_eq!(m.index_of(&m.antecedent_of(flat)), flat);
        }
    }

    #[test]
    fn activation_examples() {
        let m = plane_model(3);
        assert_eq!(
            m.activation(&[5.0, 5.0]).unwrap(),
            vec![(m.index_of(&[1, 1]), 1.0)]
        );
        assert_eq!(
            m.activation(&[2.5, 5.0]).unwrap(),
            vec![(m.index_of(&[0, 1]), 0.5), (m.index_of(&[1, 1]), 0.5)]
        );
        let four = m.activation(&[2.5, 2.5]).unwrap();
        assert_eq!(four.len(), 4);
        assert!(four.iter().all(|&(_, w)| w == 0.25));
    }

    #[test]
    fn activation_rejects_wrong_dimension() {
        let m = plane_model(3);
        assert!(matches!(
            m.activation(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn infer_examples() {
        let m = plane_model(3);
        assert_eq!(m.infer(&[3.0, 8.0]).unwrap(), 11.0);

        let mut single = FuzzyModel::empty(m.inputs().to_vec(), m.output().clone()).unwrap();
        single
            .set_rule(Rule {
                antecedent: vec![0, 0],
                conclusion: 7.0,
                degree: 1.0,
            })
            .unwrap();
        assert_eq!(single.infer(&[0.0, 0.0]).unwrap(), 7.0);
        assert!(matches!(
            single.infer(&[10.0, 10.0]),
            Err(Error::NoActiveRule)
        ));
    }

    #[test]
    fn rule_diff_examples() {
        let m = plane_model(3);
        assert_eq!(
            rule_diff(&m, &m).unwrap(),
            RuleDiff {
                unchanged: 9,
                ..Default::default()
            }
        );

        let mut a = m.clone();
        let mut b = m.clone();
        b.clear_cell(0);
        assert_eq!(rule_diff(&a, &b).unwrap().only_a, 1);
        assert_eq!(rule_diff(&b, &a).unwrap().only_b, 1);

        // One output set over on the 13-set partition of [0, 20].
        let s_out = a.output().spacing();
        let center = a.index_of(&[1, 1]);
        a.set_conclusion(center, 5.0);
        let mut b = a.clone();
        b.set_conclusion(center, 5.0 + s_out);
        let brute_argmax = |v: f64| {
            let degrees: Vec<f64> = a.output().functions().iter().map(|f| f.degree(v)).collect();
            let max = degrees.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            degrees.iter().position(|&d| d == max).unwrap()
        };
        assert_ne!(brute_argmax(5.0), brute_argmax(5.0 + s_out));
        let d = rule_diff(&a, &b).unwrap();
        assert_eq!(d.changed, 1);
        assert_eq!(d.unchanged, 8);
    }

    #[test]
    fn rule_diff_shape_mismatch() {
        assert!(matches!(
            rule_diff(&plane_model(3), &plane_model(5)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn set_rule_validates_bounds() {
        let mut m = FuzzyModel::empty(vec![tri(0.0, 1.0, 3)], tri(0.0, 1.0, 2)).unwrap();
        let bad = Rule {
            antecedent: vec![3],
            conclusion: 0.0,
            degree: 1.0,
        };
        assert!(m.set_rule(bad).is_err());
    }

    proptest! {
        #[test]
        fn linear_reproduction(n in prop::sample::select(vec![2usize, 3, 5, 7, 9]), x in 0.0f64..=10.0, y in 0.0f64..=10.0) {
            let m = plane_model(n);
            prop_assert!((m.infer(&[x, y]).unwrap() - (x + y)).abs() <= 1e-9);
        }

        #[test]
        fn weights_sum_to_one(n in 2usize..10, x in 0.0f64..=10.0, y in 0.0f64..=10.0) {
            let m = plane_model(n);
            let act = m.activation(&[x, y]).unwrap();
            prop_assert!(act.len() <= 4);
            let total: f64 = act.iter().map(|&(_, w)| w).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn output_is_convex(
            conclusions in prop::collection::vec(-50.0f64..50.0, 25),
            x in -2.0f64..12.0,
            y in -2.0f64..12.0,
            gauss in any::<bool>(),
        ) {
            let kind = if gauss { MfKind::Gaussian } else { MfKind::Triangular };
            let p = Partition::uniform(0.0, 10.0, 5, kind, 0.5).unwrap();
            let mut it = conclusions.iter();
            let m = FuzzyModel::from_fn(vec![p.clone(), p], tri(0.0, 20.0, 13), |_| *it.next().unwrap()).unwrap();
            let active: Vec<f64> = m
                .activation(&[x, y])
                .unwrap()
                .iter()
                .map(|&(flat, _)| m.cell(flat).unwrap().conclusion)
                .collect();
            let lo = active.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = active.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let f = m.infer(&[x, y]).unwrap();
            prop_assert!(f >= lo - 1e-9 && f <= hi + 1e-9);
        }
    }
}
