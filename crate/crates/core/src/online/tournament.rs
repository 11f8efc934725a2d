use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::ScaleError;
use crate::scale::ElementId;

/// Number of levels of a `branch`-ary grouping of `n_prime` elements, at least 1.
pub fn tree_depth(n_prime: usize, branch: usize) -> usize {
    assert!(branch >= 2, "branching factor must be at least 2");
    let mut d = 1;
    let mut cap = branch;
    while cap < n_prime {
        cap = cap.saturating_mul(branch);
        d += 1;
    }
    d
}

#[derive(Debug, Clone)]
struct Block {
    /// Elements for level-1 blocks; empty above.
    members: Vec<ElementId>,
    min: Option<ElementId>,
}

/// Hierarchical `k'`-ary grouping used for repeated minimum extraction.
#[derive(Debug, Clone)]
pub struct LevelGrid {
    branch: usize,
    levels: Vec<Vec<Block>>,
    home: BTreeMap<ElementId, usize>,
}

impl LevelGrid {
    pub fn new(middle: &[ElementId], branch: usize) -> Self {
        assert!(branch >= 2, "branching factor must be at least 2");
        let mut home = BTreeMap::new();
        let base: Vec<Block> = middle
            .chunks(branch)
            .enumerate()
            .map(|(j, chunk)| {
                for &e in chunk {
                    home.insert(e, j);
                }
                Block {
                    members: chunk.to_vec(),
                    min: None,
                }
            })
            .collect();
        let mut levels = alloc::vec![base];
        while levels[levels.len() - 1].len() > 1 {
            let width = levels[levels.len() - 1].len().div_ceil(branch);
            let up = (0..width)
                .map(|_| Block {
                    members: Vec::new(),
                    min: None,
                })
                .collect();
            levels.push(up);
        }
        LevelGrid {
            branch,
            levels,
            home,
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn candidates(&self, level: usize, j: usize) -> Vec<ElementId> {
        if level == 0 {
            return self.levels[0][j].members.clone();
        }
        let below = &self.levels[level - 1];
        let end = ((j + 1) * self.branch).min(below.len());
        below[j * self.branch..end]
            .iter()
            .filter_map(|b| b.min)
            .collect()
    }

    fn refresh<F>(&mut self, level: usize, j: usize, min_of: &mut F) -> Result<(), ScaleError>
    where
        F: FnMut(&[ElementId]) -> Result<ElementId, ScaleError>,
    {
        let cands = self.candidates(level, j);
        let min = match cands.len() {
            0 => None,
            1 => Some(cands[0]),
            _ => {
                let m = min_of(&cands)?;
                if !cands.contains(&m) {
                    return Err(ScaleError::Inconsistent("block minimum outside the block"));
                }
                Some(m)
            }
        };
        self.levels[level][j].min = min;
        Ok(())
    }

    /// Sorts ascending. `min_of` is only called on two or more candidates.
    pub fn sort_with<F>(mut self, mut min_of: F) -> Result<Vec<ElementId>, ScaleError>
    where
        F: FnMut(&[ElementId]) -> Result<ElementId, ScaleError>,
    {
        if self.home.is_empty() {
            return Ok(Vec::new());
        }
        for level in 0..self.levels.len() {
            for j in 0..self.levels[level].len() {
                self.refresh(level, j, &mut min_of)?;
            }
        }
        let top = self.levels.len() - 1;
        let mut out = Vec::with_capacity(self.home.len());
        while let Some(m) = self.levels[top][0].min {
            out.push(m);
            let mut j = self.home[&m];
            self.levels[0][j].members.retain(|&e| e != m);
            for level in 0..self.levels.len() {
                self.refresh(level, j, &mut min_of)?;
                j /= self.branch;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_uses_ceiling() {
        assert_eq!(tree_depth(1, 3), 1);
        assert_eq!(tree_depth(3, 3), 1);
        assert_eq!(tree_depth(4, 3), 2);
        assert_eq!(tree_depth(9, 3), 2);
        assert_eq!(tree_depth(27, 3), 3);
        assert_eq!(tree_depth(28, 3), 4);
    }

    #[test]
    fn grid_depth_matches_formula() {
        for n in 1..60 {
            for b in 2..6 {
                let ids: Vec<ElementId> = (0..n).map(ElementId).collect();
                assert_eq!(LevelGrid::new(&ids, b).depth(), tree_depth(n, b));
            }
        }
    }

    #[test]
    fn sorts_with_plain_minimum() {
        let ids: Vec<ElementId> = [5, 3, 9, 1, 7, 2, 8].into_iter().map(ElementId).collect();
        let mut calls = 0;
        let sorted = LevelGrid::new(&ids, 3)
            .sort_with(|c| {
                calls += 1;
                Ok(*c.iter().min().unwrap())
            })
            .unwrap();
        let want: Vec<ElementId> = [1, 2, 3, 5, 7, 8, 9].into_iter().map(ElementId).collect();
        assert_eq!(sorted, want);
        assert!(calls <= 2 * 2 * 7);
    }
}
