use crate::vector::Vector;

/// One logged iterate. `acc` is the true accuracy `f(x_k) - f*`, never a
/// noisy value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Record {
    pub k: u64,
    pub nevals: u64,
    pub f_true: f64,
    pub acc: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub records: Vec<Record>,
    pub x_final: Option<Vector>,
}

impl Trajectory {
    pub fn push(&mut self, record: Record) {
        debug_assert!(
            self.records.last().is_none_or(|last| record.nevals > last.nevals || record.k == 0),
            "nevals must increase"
        );
        self.records.push(record);
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    pub fn final_accuracy(&self) -> Option<f64> {
        self.last().map(|r| r.acc)
    }

    /// Accuracy logged at iteration `k`, if that iteration was recorded.
    pub fn accuracy_at_iteration(&self, k: u64) -> Option<f64> {
        self.records
            .binary_search_by_key(&k, |r| r.k)
            .ok()
            .map(|i| self.records[i].acc)
    }

    /// Last record with `nevals <= budget` (carry-forward lookup).
    pub fn at_evals(&self, budget: u64) -> Option<&Record> {
        let idx = self.records.partition_point(|r| r.nevals <= budget);
        idx.checked_sub(1).map(|i| &self.records[i])
    }
}
