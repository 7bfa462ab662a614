use super::SparseMat;
use crate::groups::{ConjugacyData, GroupTable};

/// The 0/1 matrix of relation `j` with rows indexed by class `i` and
/// columns by class `k`: entry `(x, y)` is 1 iff `x⁻¹y` lies in class `j`.
pub fn restrict_block(group: &GroupTable, classes: &ConjugacyData, i: usize, j: usize, k: usize) -> SparseMat {
    let ncols = classes.sizes[k];
    let rows = classes.members[i]
        .iter()
        .map(|&x| {
            let mut row: Vec<(u32, u32)> = classes.members[j]
                .iter()
                .map(|&c| group.mul(x, c))
                .filter(|&y| classes.class_of(y) == k)
                .map(|y| (classes.position(y) as u32, 1))
                .collect();
            row.sort_unstable_by_key(|&(c, _)| c);
            row
        })
        .collect();
    SparseMat::from_rows(ncols, rows).expect("right multiplication is injective")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugacy_classes, DEFAULT_MAX_ORDER};

    #[test]
    fn block_rows_match_brute_force() {
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let c = conjugacy_classes(&g);
        let r = c.num_classes();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let m = restrict_block(&g, &c, i, j, k);
                    assert_eq!((m.nrows(), m.ncols()), (c.sizes[i], c.sizes[k]));
                    for (row, &x) in c.members[i].iter().enumerate() {
                        let expected = (0..g.order())
                            .filter(|&y| c.class_of(y) == k && c.class_of(g.mul(g.inv(x), y)) == j)
                            .count();
                        assert_eq!(m.row(row).len(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn blocks_of_relations_partition_the_class_product() {
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let c = conjugacy_classes(&g);
        let r = c.num_classes();
        for i in 0..r {
            for k in 0..r {
                let total: usize = (0..r).map(|j| restrict_block(&g, &c, i, j, k).nnz()).sum();
                assert_eq!(total, c.sizes[i] * c.sizes[k]);
            }
        }
    }
}
