//! Pilot and phase assignment for time-shifted frames.
//!
//! A class-`n` user uploads its pilot on slots `t ≡ phase (mod n)`. Up to
//! `n` users of the same class share one pilot id with distinct phases, so
//! within a cell a pilot id is active on at most one user per slot.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UserSlot {
    /// Index of the user within its cell.
    pub user_id: usize,
    pub cell_id: usize,
    pub class_n: u32,
    pub pilot_id: usize,
    /// In `[0, class_n)`.
    pub phase: u32,
}

impl UserSlot {
    pub fn transmits_at(&self, slot: u64) -> bool {
        slot % self.class_n as u64 == self.phase as u64
    }
}

/// Assignments for every user of every covered cell, ordered by
/// `(cell_id, user_id)` with user ids contiguous from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PilotPlan {
    assignments: Vec<UserSlot>,
}

impl PilotPlan {
    pub fn assignments(&self) -> &[UserSlot] {
        &self.assignments
    }

    pub fn cell(&self, cell_id: usize) -> impl Iterator<Item = &UserSlot> + '_ {
        self.assignments.iter().filter(move |u| u.cell_id == cell_id)
    }

    pub fn cells(&self) -> Vec<usize> {
        let mut cells: Vec<usize> = self.assignments.iter().map(|u| u.cell_id).collect();
        cells.dedup();
        cells
    }

    pub fn users_in_cell(&self, cell_id: usize) -> usize {
        self.cell(cell_id).count()
    }

    pub fn user(&self, cell_id: usize, user_id: usize) -> Option<&UserSlot> {
        self.cell(cell_id).find(|u| u.user_id == user_id)
    }

    /// `pilot_id` for each user of the cell, indexed by user id.
    pub fn pilot_map(&self, cell_id: usize) -> Vec<usize> {
        self.cell(cell_id).map(|u| u.pilot_id).collect()
    }

    pub fn classes(&self, cell_id: usize) -> Vec<u32> {
        self.cell(cell_id).map(|u| u.class_n).collect()
    }

    /// Number of distinct pilot ids used in one cell.
    pub fn pilots_used(&self, cell_id: usize) -> usize {
        let mut ids: Vec<usize> = self.cell(cell_id).map(|u| u.pilot_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Least common multiple of the classes present: the mask period.
    pub fn period(&self) -> u64 {
        self.assignments.iter().fold(1u64, |acc, u| lcm(acc, u.class_n as u64))
    }

    /// Concatenates single-cell plans. Cell ids must be distinct.
    pub fn merge(plans: Vec<PilotPlan>) -> PilotPlan {
        let mut assignments: Vec<UserSlot> = plans.into_iter().flat_map(|p| p.assignments).collect();
        assignments.sort_by_key(|u| (u.cell_id, u.user_id));
        PilotPlan { assignments }
    }

    /// CSV export with header `user_id,cell_id,class_n,pilot_id,phase`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "user_id,cell_id,class_n,pilot_id,phase")?;
        for u in &self.assignments {
            writeln!(out, "{},{},{},{},{}", u.user_id, u.cell_id, u.class_n, u.pilot_id, u.phase)?;
        }
        Ok(())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Pilots needed to pack `classes`: `Σ_n ceil(count_n / n)`.
pub fn pilots_required(classes: &[u32]) -> usize {
    let mut counts = std::collections::BTreeMap::<u32, usize>::new();
    for &n in classes {
        *counts.entry(n).or_default() += 1;
    }
    counts.iter().map(|(&n, &c)| c.div_ceil(n as usize)).sum()
}

/// Packs one cell's users onto pilots. Users are taken in descending class
/// order (ties by user id); each class fills a pilot with phases
/// `0, 1, …, n−1` before opening the next pilot id.
pub fn assign_pilots(cell_id: usize, classes: &[u32], num_pilots: usize, max_class: u32) -> Result<PilotPlan> {
    if let Some(&bad) = classes.iter().find(|&&n| n == 0 || n > max_class) {
        return Err(Error::ClassBound { class_n: bad, max_class });
    }
    let required = pilots_required(classes);
    if required > num_pilots {
        return Err(Error::Capacity { required, available: num_pilots });
    }

    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(classes[k]), k));

    let mut assignments = Vec::with_capacity(classes.len());
    let mut next_pilot = 0usize;
    let mut open: Option<(u32, usize, u32)> = None; // (class, pilot, next phase)
    for k in order {
        let n = classes[k];
        let (pilot_id, phase) = match open {
            Some((c, p, ph)) if c == n && ph < n => (p, ph),
            _ => {
                next_pilot += 1;
                (next_pilot - 1, 0)
            }
        };
        open = Some((n, pilot_id, phase + 1));
        assignments.push(UserSlot { user_id: k, cell_id, class_n: n, pilot_id, phase });
    }
    assignments.sort_by_key(|u| u.user_id);
    Ok(PilotPlan { assignments })
}

/// How pilot ids line up across cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilotReuse {
    /// Every cell uses the ids produced by [`assign_pilots`].
    Aligned,
    /// Each cell relabels its ids with a seeded permutation of `[0, OP)`.
    Shuffled { seed: u64 },
}

/// Plans every cell independently and combines them.
pub fn assign_network(
    classes_per_cell: &[Vec<u32>],
    num_pilots: usize,
    max_class: u32,
    reuse: PilotReuse,
) -> Result<PilotPlan> {
    let mut plans = Vec::with_capacity(classes_per_cell.len());
    for (cell, classes) in classes_per_cell.iter().enumerate() {
        let mut plan = assign_pilots(cell, classes, num_pilots, max_class)?;
        if let PilotReuse::Shuffled { seed } = reuse {
            let mut relabel: Vec<usize> = (0..num_pilots).collect();
            SeededRng::from_tuple(&[seed, cell as u64, 0x5C4E]).shuffle(&mut relabel);
            for u in &mut plan.assignments {
                u.pilot_id = relabel[u.pilot_id];
            }
        }
        plans.push(plan);
    }
    Ok(PilotPlan::merge(plans))
}

/// Pilot activity of one cell in one slot (`S_l`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityMask {
    bits: Vec<bool>,
}

impl SparsityMask {
    pub fn new(bits: Vec<bool>) -> Self {
        SparsityMask { bits }
    }

    pub fn all(k: usize, on: bool) -> Self {
        SparsityMask { bits: vec![on; k] }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `K′`, users uploading a pilot this slot.
    pub fn k_prime(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `K″ = K − K′`.
    pub fn k_double_prime(&self) -> usize {
        self.len() - self.k_prime()
    }
}

pub fn sparsity_mask(plan: &PilotPlan, cell: usize, slot: u64) -> SparsityMask {
    SparsityMask { bits: plan.cell(cell).map(|u| u.transmits_at(slot)).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationStats {
    /// `α = K′ / OP`.
    pub alpha: f64,
    /// `L′ = max(1, round(L·α))`, cells uploading the same sequence.
    pub l_prime: usize,
    /// `L̄′ = (L′ − 1)γ + 1`.
    pub l_bar_prime: f64,
}

pub fn contamination_stats(
    k_prime: usize,
    num_pilots: usize,
    num_cells: usize,
    gamma: f64,
) -> Result<ContaminationStats> {
    if k_prime > num_pilots {
        return Err(Error::SlotInfeasible { active: k_prime, available: num_pilots });
    }
    let alpha = k_prime as f64 / num_pilots as f64;
    // f64::round is half-away-from-zero.
    let l_prime = ((num_cells as f64 * alpha).round() as usize).max(1);
    Ok(ContaminationStats { alpha, l_prime, l_bar_prime: (l_prime as f64 - 1.0) * gamma + 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_class_three_users_share_one_pilot() {
        let plan = assign_pilots(0, &[3, 3, 3], 1, 30).unwrap();
        assert_eq!(plan.pilots_used(0), 1);
        let mut phases: Vec<u32> = plan.cell(0).map(|u| u.phase).collect();
        phases.sort();
        assert_eq!(phases, vec![0, 1, 2]);
    }

    #[test]
    fn four_class_three_users_overflow_one_pilot() {
        let err = assign_pilots(0, &[3, 3, 3, 3], 1, 30).unwrap_err();
        assert!(matches!(err, Error::Capacity { required: 2, available: 1 }));
    }

    #[test]
    fn conventional_cell_uses_every_pilot() {
        let plan = assign_pilots(0, &[1; 30], 30, 30).unwrap();
        assert_eq!(plan.pilots_used(0), 30);
        assert!(plan.cell(0).all(|u| u.phase == 0));
        assert!(sparsity_mask(&plan, 0, 17).bits().iter().all(|&b| b));
    }

    #[test]
    fn class_above_cap_is_rejected() {
        assert!(matches!(assign_pilots(0, &[2, 31], 30, 30), Err(Error::ClassBound { class_n: 31, .. })));
        assert!(matches!(assign_pilots(0, &[0], 30, 30), Err(Error::ClassBound { class_n: 0, .. })));
    }

    #[test]
    fn shifted_frame_mask() {
        let plan = assign_pilots(0, &[3, 3, 3], 1, 30).unwrap();
        // users 0, 1, 2 get phases 0, 1, 2 in user order
        assert_eq!(sparsity_mask(&plan, 0, 1).bits(), &[false, true, false]);
    }

    #[test]
    fn class_two_phase_one_is_idle_on_even_slots() {
        let plan = assign_pilots(0, &[2, 2], 1, 30).unwrap();
        let u = plan.user(0, 1).unwrap();
        assert_eq!(u.phase, 1);
        assert!(!sparsity_mask(&plan, 0, 4).get(1));
    }

    #[test]
    fn packing_is_descending_by_class() {
        let plan = assign_pilots(0, &[1, 4, 2, 4, 2], 10, 30).unwrap();
        // class 4 users open pilot 0, class 2 pilot 1, class 1 pilot 2
        assert_eq!(plan.user(0, 1).unwrap().pilot_id, 0);
        assert_eq!(plan.user(0, 3).unwrap().pilot_id, 0);
        assert_eq!(plan.user(0, 2).unwrap().pilot_id, 1);
        assert_eq!(plan.user(0, 4).unwrap().pilot_id, 1);
        assert_eq!(plan.user(0, 0).unwrap().pilot_id, 2);
        assert_eq!(pilots_required(&[1, 4, 2, 4, 2]), 3);
    }

    #[test]
    fn contamination_reference_values() {
        let s = contamination_stats(30, 30, 7, 0.3).unwrap();
        assert_eq!(s.alpha, 1.0);
        assert_eq!(s.l_prime, 7);
        assert!((s.l_bar_prime - 2.8).abs() < 1e-12);

        let s = contamination_stats(10, 30, 7, 0.3).unwrap();
        assert!((s.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.l_prime, 2);
        assert!((s.l_bar_prime - 1.3).abs() < 1e-12);

        let s = contamination_stats(1, 30, 7, 0.3).unwrap();
        assert_eq!(s.l_prime, 1);
        assert_eq!(s.l_bar_prime, 1.0);

        assert!(matches!(contamination_stats(31, 30, 7, 0.3), Err(Error::SlotInfeasible { .. })));
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        // L·α = 7 · 15/30 = 3.5 → 4
        assert_eq!(contamination_stats(15, 30, 7, 0.3).unwrap().l_prime, 4);
        // 2.5 → 3
        assert_eq!(contamination_stats(5, 10, 5, 0.3).unwrap().l_prime, 3);
    }

    #[test]
    fn shuffled_reuse_relabels_within_range() {
        let classes = vec![vec![3u32; 9], vec![3u32; 9]];
        let plan = assign_network(&classes, 6, 30, PilotReuse::Shuffled { seed: 4 }).unwrap();
        assert_eq!(plan.cells(), vec![0, 1]);
        for u in plan.assignments() {
            assert!(u.pilot_id < 6);
        }
        assert_eq!(plan.pilots_used(0), 3);
        let aligned = assign_network(&classes, 6, 30, PilotReuse::Aligned).unwrap();
        assert_eq!(aligned.pilot_map(0), aligned.pilot_map(1));
    }

    #[test]
    fn csv_export_header_and_rows() {
        let plan = assign_pilots(2, &[3, 1], 4, 30).unwrap();
        let mut buf = Vec::new();
        plan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "user_id,cell_id,class_n,pilot_id,phase\n0,2,3,0,0\n1,2,1,1,0\n");
    }

    fn class_mix() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 10, 12]), 1..40)
    }

    proptest! {
        #[test]
        fn masks_are_periodic_and_exclusive(classes in class_mix()) {
            let plan = assign_pilots(0, &classes, 64, 30).unwrap();
            let period = plan.period();
            let mut uploads = vec![0u64; classes.len()];
            for t in 0..period {
                let mask = sparsity_mask(&plan, 0, t);
                prop_assert_eq!(&mask, &sparsity_mask(&plan, 0, t + period));
                let mut seen = std::collections::HashSet::new();
                for (u, &on) in plan.cell(0).zip(mask.bits()) {
                    if on {
                        prop_assert!(seen.insert(u.pilot_id));
                        uploads[u.user_id] += 1;
                    }
                }
            }
            for (k, &n) in classes.iter().enumerate() {
                prop_assert_eq!(uploads[k], period / n as u64);
            }
            prop_assert_eq!(plan.pilots_used(0), pilots_required(&classes));
        }
    }
}
