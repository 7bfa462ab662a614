use serde::Serialize;

use super::{cycle_type, GroupTable, Partition};

/// Conjugacy classes of a group.
///
/// Class 0 is `{1}`. For symmetric groups classes are ordered by their
/// cycle-type label in canonical partition order; otherwise by smallest
/// element index.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyData {
    pub class_of: Vec<u32>,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    pub inverse_class: Vec<usize>,
    /// Cycle-type labels, present for symmetric groups only.
    pub labels: Option<Vec<Partition>>,
    /// Elements of each class, ascending.
    pub members: Vec<Vec<usize>>,
    /// Position of each element inside its class's member list.
    pub positions: Vec<u32>,
}

impl ConjugacyData {
    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    #[inline]
    pub fn position(&self, x: usize) -> usize {
        self.positions[x] as usize
    }

    /// Display labels: partition strings for symmetric groups, `C0, C1, ..`
    /// otherwise.
    pub fn label_strings(&self) -> Vec<String> {
        match &self.labels {
            Some(labels) => labels.iter().map(|p| p.to_string()).collect(),
            None => (0..self.num_classes()).map(|c| format!("C{c}")).collect(),
        }
    }

    /// Index of the class with the given label.
    pub fn class_with_label(&self, label: &Partition) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
}

/// Orbits of `x ↦ g x g⁻¹`, expanded from the group's generating set.
pub fn conjugacy_classes(group: &GroupTable) -> ConjugacyData {
    let n = group.order();
    let maps: Vec<Vec<u32>> = group.generators().iter().map(|&g| group.conjugation_map(g)).collect();
    let mut raw_class = vec![u32::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if raw_class[start] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        raw_class[start] = id;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for map in &maps {
                let y = map[x] as usize;
                if raw_class[y] == u32::MAX {
                    raw_class[y] = id;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }

    let labels: Option<Vec<Partition>> = group.symmetric_degree().map(|_| {
        orbits
            .iter()
            .map(|orbit| cycle_type(group.permutation(orbit[0]).expect("symmetric element")))
            .collect()
    });
    let mut order: Vec<usize> = (0..orbits.len()).collect();
    if let Some(labels) = &labels {
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    }
    let mut remap = vec![0u32; orbits.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new as u32;
    }
    let class_of: Vec<u32> = raw_class.iter().map(|&c| remap[c as usize]).collect();
    let members: Vec<Vec<usize>> = order.iter().map(|&old| orbits[old].clone()).collect();
    let labels = labels.map(|l| order.iter().map(|&old| l[old].clone()).collect());
    let representatives: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let sizes = members.iter().map(Vec::len).collect();
    let inverse_class = representatives.iter().map(|&r| class_of[group.inv(r)] as usize).collect();
    let mut positions = vec![0u32; n];
    for class in &members {
        for (pos, &x) in class.iter().enumerate() {
            positions[x] = pos as u32;
        }
    }
    ConjugacyData { class_of, representatives, sizes, inverse_class, labels, members, positions }
}

/// True iff every class is closed under inversion.
pub fn inversion_closed(classes: &ConjugacyData) -> bool {
    classes.inverse_class.iter().enumerate().all(|(c, &d)| c == d)
}
