//! Linear systems `M x = 0`, their admissibility, and the named families.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{positive_solution_exists, Rational, RationalMatrix};

#[derive(Debug, thiserror::Error)]
pub enum SystemError {
    #[error("matrix parse error: {0}")]
    Parse(String),
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

/// The families with closed-form constants, plus the fixed worked examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Arithmetic progressions of length `k`.
    KAp {
        k: usize,
    },
    Sidon,
    /// `g + 1` equal sums of `h` terms.
    Bhg {
        h: usize,
        g: usize,
    },
    /// Hilbert cubes of dimension `k`.
    KCube {
        k: usize,
    },
    /// `x + y = z`.
    SumFree,
    /// `x + y = k z`.
    KSumFree {
        k: usize,
    },
    /// `x_1 + .. + x_k = k y`.
    KBarycentric {
        k: usize,
    },
    /// Sidon row stacked on a weighted mean condition in 9 variables.
    M1,
    /// 3-AP, Sidon-type and mean rows in 8 variables; not balanced.
    M2,
    /// `x1 + x2 + x3 = x4 + x5 + x6 + x7`.
    ThreeFour,
}

impl Family {
    pub fn name(&self) -> String {
        match *self {
            Family::KAp { k } => format!("{k}-AP"),
            Family::Sidon => "Sidon".into(),
            Family::Bhg { h, g } => format!("B_{h}[{g}]"),
            Family::KCube { k } => format!("{k}-cube"),
            Family::SumFree => "sum-free".into(),
            Family::KSumFree { k } => format!("{k}-sum-free"),
            Family::KBarycentric { k } => format!("{k}-barycentric"),
            Family::M1 => "M1".into(),
            Family::M2 => "M2".into(),
            Family::ThreeFour => "x1+x2+x3=x4+..+x7".into(),
        }
    }

    /// Looks up a family by its command-line keyword.
    pub fn from_keyword(
        keyword: &str,
        k: Option<usize>,
        h: Option<usize>,
        g: Option<usize>,
    ) -> Result<Self, SystemError> {
        let need = |value: Option<usize>, flag: &str| {
            value.ok_or_else(|| SystemError::Family(format!("{keyword} needs --{flag}")))
        };
        Ok(match keyword.to_ascii_lowercase().as_str() {
            "kap" | "ap" => Family::KAp { k: need(k, "k")? },
            "sidon" => Family::Sidon,
            "bhg" => Family::Bhg {
                h: need(h, "h")?,
                g: need(g, "g")?,
            },
            "kcube" | "cube" => Family::KCube { k: need(k, "k")? },
            "sumfree" => Family::SumFree,
            "ksumfree" => Family::KSumFree { k: need(k, "k")? },
            "barycentric" | "kbarycentric" => Family::KBarycentric { k: need(k, "k")? },
            "m1" => Family::M1,
            "m2" => Family::M2,
            "eq7" | "threefour" => Family::ThreeFour,
            other => return Err(SystemError::UnknownFamily(other.to_string())),
        })
    }

    /// Integer rows of the family's matrix.
    pub fn rows(&self) -> Result<Vec<Vec<i64>>, SystemError> {
        let bad = |msg: &str| Err(SystemError::Family(msg.to_string()));
        Ok(match *self {
            Family::KAp { k } => {
                if k < 3 {
                    return bad("k-AP needs k >= 3");
                }
                (0..k - 2)
                    .map(|i| {
                        let mut row = vec![0; k];
                        row[i] = 1;
                        row[i + 1] = -2;
                        row[i + 2] = 1;
                        row
                    })
                    .collect()
            }
            Family::Sidon => vec![vec![1, 1, -1, -1]],
            Family::Bhg { h, g } => {
                if h < 2 || g < 1 {
                    return bad("B_h[g] needs h >= 2 and g >= 1");
                }
                let m = h * (g + 1);
                (0..g)
                    .map(|i| {
                        let mut row = vec![0; m];
                        row[i * h..(i + 1) * h].fill(1);
                        row[(i + 1) * h..(i + 2) * h].fill(-1);
                        row
                    })
                    .collect()
            }
            Family::KCube { k } => {
                if !(2..=6).contains(&k) {
                    return bad("k-cube needs 2 <= k <= 6");
                }
                // Column S (as a bitmask) holds x_S; one row per |S| >= 2.
                let m = 1usize << k;
                (0..m)
                    .filter(|s| s.count_ones() >= 2)
                    .map(|s| {
                        let mut row = vec![0i64; m];
                        row[s] = 1;
                        for i in 0..k {
                            if s & (1 << i) != 0 {
                                row[1 << i] = -1;
                            }
                        }
                        row[0] = i64::from(s.count_ones()) - 1;
                        row
                    })
                    .collect()
            }
            Family::SumFree => vec![vec![1, 1, -1]],
            Family::KSumFree { k } => {
                if k < 1 {
                    return bad("k-sum-free needs k >= 1");
                }
                vec![vec![1, 1, -(k as i64)]]
            }
            Family::KBarycentric { k } => {
                if k < 2 {
                    return bad("k-barycentric needs k >= 2");
                }
                let mut row = vec![1; k + 1];
                row[k] = -(k as i64);
                vec![row]
            }
            Family::M1 => vec![
                vec![1, 1, -1, -1, 0, 0, 0, 0, 0],
                vec![1, 1, 1, 1, 1, 1, 1, 1, -6],
            ],
            Family::M2 => vec![
                vec![1, -2, 1, 0, 0, 0, 0, 0],
                vec![0, 1, 1, -1, -1, 0, 0, 0],
                vec![1, 1, 1, 1, 1, 1, 1, -7],
            ],
            Family::ThreeFour => vec![vec![1, 1, 1, -1, -1, -1, -1]],
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Outcome of the three admissibility conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub positive: bool,
    pub irredundant: bool,
    /// Zero-based columns `(i, j)` forced equal in every solution.
    #[serde(serialize_with = "serialize_pair_one_based")]
    pub failing_pair: Option<(usize, usize)>,
    pub nondegenerate: bool,
    pub fewer_rows_than_columns: bool,
    pub admissible: bool,
}

fn serialize_pair_one_based<S: serde::Serializer>(
    pair: &Option<(usize, usize)>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    pair.map(|(i, j)| [i + 1, j + 1]).serialize(serializer)
}

impl AdmissibilityReport {
    pub fn evaluate(matrix: &RationalMatrix) -> Self {
        let positive = check_positivity(matrix);
        let failing_pair = check_irredundancy(matrix);
        let nondegenerate = check_nondegeneracy(matrix);
        let fewer_rows_than_columns = matrix.rows() < matrix.cols();
        Self {
            positive,
            irredundant: failing_pair.is_none(),
            failing_pair,
            nondegenerate,
            fewer_rows_than_columns,
            admissible: positive
                && failing_pair.is_none()
                && nondegenerate
                && fewer_rows_than_columns,
        }
    }

    /// Human-readable name of the first violated condition.
    pub fn violation(&self) -> Option<String> {
        if !self.fewer_rows_than_columns {
            return Some("need fewer equations than variables (r < m)".into());
        }
        if !self.nondegenerate {
            return Some("non-degeneracy violated (matrix is not of full row rank)".into());
        }
        if !self.positive {
            return Some("positivity violated (no solution with all entries positive)".into());
        }
        if let Some((i, j)) = self.failing_pair {
            return Some(format!("irredundancy violated (pair {},{})", i + 1, j + 1));
        }
        None
    }
}

/// True iff `M x = 0` has a solution with every entry at least one.
pub fn check_positivity(matrix: &RationalMatrix) -> bool {
    positive_solution_exists(matrix)
}

/// `None` when irredundant, else the first pair `(i, j)`, `i < j`, such that
/// every solution has `x_i = x_j`.
pub fn check_irredundancy(matrix: &RationalMatrix) -> Option<(usize, usize)> {
    let m = matrix.cols();
    let rank = matrix.rank();
    for i in 0..m {
        for j in i + 1..m {
            let mut row = vec![Rational::zero(); m];
            row[i] = Rational::one();
            row[j] = -Rational::one();
            let augmented = matrix.with_row(row).expect("row has m entries");
            if augmented.rank() == rank {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn check_nondegeneracy(matrix: &RationalMatrix) -> bool {
    matrix.rank() == matrix.rows()
}

/// An integer matrix `M` identified with the system `M x = 0`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    rows: Vec<Vec<i64>>,
    matrix: RationalMatrix,
    name: Option<String>,
    family: Option<Family>,
    admissibility: AdmissibilityReport,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<i64>>, name: Option<String>) -> Result<Self, SystemError> {
        let cols = rows.first().map_or(0, Vec::len);
        if cols == 0 {
            return Err(SystemError::Parse(
                "matrix needs at least one column".into(),
            ));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(SystemError::Parse(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                row.len()
            )));
        }
        let matrix = RationalMatrix::from_integer_rows(&rows)
            .map_err(|e| SystemError::Parse(e.to_string()))?;
        let admissibility = AdmissibilityReport::evaluate(&matrix);
        Ok(Self {
            rows,
            matrix,
            name,
            family: None,
            admissibility,
        })
    }

    /// Builds the system for a named family.
    pub fn named(family: Family) -> Result<Self, SystemError> {
        let mut system = Self::new(family.rows()?, Some(family.name()))?;
        system.family = Some(family);
        Ok(system)
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn integer_rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Number of equations `r`.
    pub fn r(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of variables `m`.
    pub fn m(&self) -> usize {
        self.matrix.cols()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn admissibility(&self) -> &AdmissibilityReport {
        &self.admissibility
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility.admissible
    }

    /// `M x` for an integer vector, in 128-bit arithmetic.
    pub fn apply(&self, x: &[i64]) -> Vec<i128> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&a, &v)| i128::from(a) * i128::from(v))
                    .sum()
            })
            .collect()
    }

    pub fn is_solution(&self, x: &[i64]) -> bool {
        x.len() == self.m() && self.apply(x).iter().all(|&v| v == 0)
    }

    /// Parses either the text format (`r m` header then `r` rows) or a JSON
    /// object `{"name": .., "rows": [[..], ..]}`.
    pub fn parse(input: &str) -> Result<Self, SystemError> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    pub fn parse_text(input: &str) -> Result<Self, SystemError> {
        let mut lines = input
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| SystemError::Parse("empty input".into()))?;
        let dims = parse_ints(header)?;
        let [r, m] = dims[..] else {
            return Err(SystemError::Parse(format!(
                "header must be \"r m\", got {header:?}"
            )));
        };
        if r < 0 || m <= 0 {
            return Err(SystemError::Parse(format!("bad dimensions {r} x {m}")));
        }
        let (r, m) = (r as usize, m as usize);
        let mut rows = Vec::with_capacity(r);
        for line in lines.by_ref() {
            let row = parse_ints(line)?;
            if row.len() != m {
                return Err(SystemError::Parse(format!(
                    "row {} has {} entries, expected {m}",
                    rows.len() + 1,
                    row.len()
                )));
            }
            rows.push(row);
            if rows.len() == r {
                break;
            }
        }
        if rows.len() != r {
            return Err(SystemError::Parse(format!(
                "expected {r} rows, found {}",
                rows.len()
            )));
        }
        if lines.next().is_some() {
            return Err(SystemError::Parse(
                "trailing data after the last row".into(),
            ));
        }
        if r == 0 {
            return Err(SystemError::Parse(
                "system needs at least one equation".into(),
            ));
        }
        Self::new(rows, None)
    }

    pub fn parse_json(input: &str) -> Result<Self, SystemError> {
        #[derive(Deserialize)]
        struct Doc {
            name: Option<String>,
            rows: Vec<Vec<i64>>,
        }
        let doc: Doc =
            serde_json::from_str(input).map_err(|e| SystemError::Parse(e.to_string()))?;
        if doc.rows.is_empty() {
            return Err(SystemError::Parse(
                "system needs at least one equation".into(),
            ));
        }
        Self::new(doc.rows, doc.name)
    }

    /// The text format accepted by [`LinearSystem::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.r(), self.m());
        for row in &self.rows {
            let items: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }
}

impl PartialEq for LinearSystem {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl FromStr for LinearSystem {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

fn parse_ints(line: &str) -> Result<Vec<i64>, SystemError> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| SystemError::Parse(format!("not an integer: {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[i64]]) -> LinearSystem {
        LinearSystem::new(rows.iter().map(|r| r.to_vec()).collect(), None).unwrap()
    }

    #[test]
    fn positivity_examples() {
        assert!(check_positivity(sys(&[&[1, 1, -1, -1]]).matrix()));
        assert!(!check_positivity(sys(&[&[1, 1]]).matrix()));
        assert!(check_positivity(sys(&[&[1, -2, 1]]).matrix()));
    }

    #[test]
    fn irredundancy_examples() {
        assert_eq!(check_irredundancy(sys(&[&[1, 1, -1, -1]]).matrix()), None);
        assert_eq!(check_irredundancy(sys(&[&[1, -1]]).matrix()), Some((0, 1)));
        // B_3[2] with x1 = x4, x2 = x5, x3 = x6 merged: no pair is forced
        // equal, but the rank drops, so the derived system is not admissible.
        let derived = sys(&[&[0, 0, 0, 0, 0, 0], &[1, 1, 1, -1, -1, -1]]);
        assert_eq!(check_irredundancy(derived.matrix()), None);
        assert!(!derived.admissibility().nondegenerate);
        assert!(!derived.is_admissible());
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(check_nondegeneracy(
            LinearSystem::named(Family::M2).unwrap().matrix()
        ));
        assert!(!check_nondegeneracy(
            sys(&[&[1, -2, 1], &[1, -2, 1]]).matrix()
        ));
        let b32 = LinearSystem::named(Family::Bhg { h: 3, g: 2 }).unwrap();
        assert!(check_nondegeneracy(b32.matrix()));
        assert_eq!(b32.matrix().rank(), 2);
    }

    #[test]
    fn named_shapes() {
        let b32 = LinearSystem::named(Family::Bhg { h: 3, g: 2 }).unwrap();
        assert_eq!(
            b32.integer_rows(),
            &[
                vec![1, 1, 1, -1, -1, -1, 0, 0, 0],
                vec![0, 0, 0, 1, 1, 1, -1, -1, -1]
            ]
        );
        assert_eq!(
            LinearSystem::named(Family::KAp { k: 3 })
                .unwrap()
                .integer_rows(),
            &[vec![1, -2, 1]]
        );
        assert_eq!(
            LinearSystem::named(Family::KSumFree { k: 3 })
                .unwrap()
                .integer_rows(),
            &[vec![1, 1, -3]]
        );
        assert_eq!(
            LinearSystem::named(Family::Bhg { h: 2, g: 1 }).unwrap(),
            LinearSystem::named(Family::Sidon).unwrap()
        );
        let expected = [
            (Family::KAp { k: 6 }, 4, 6),
            (Family::Sidon, 1, 4),
            (Family::Bhg { h: 4, g: 3 }, 3, 16),
            (Family::KCube { k: 3 }, 4, 8),
            (Family::KCube { k: 4 }, 11, 16),
            (Family::SumFree, 1, 3),
            (Family::KSumFree { k: 5 }, 1, 3),
            (Family::KBarycentric { k: 4 }, 1, 5),
        ];
        for (family, r, m) in expected {
            let s = LinearSystem::named(family).unwrap();
            assert_eq!((s.r(), s.m()), (r, m), "{family}");
        }
    }

    #[test]
    fn named_parameter_ranges() {
        assert!(LinearSystem::named(Family::KAp { k: 2 }).is_err());
        assert!(LinearSystem::named(Family::Bhg { h: 1, g: 1 }).is_err());
        assert!(LinearSystem::named(Family::Bhg { h: 2, g: 0 }).is_err());
        assert!(LinearSystem::named(Family::KSumFree { k: 0 }).is_err());
        assert!(LinearSystem::named(Family::KBarycentric { k: 1 }).is_err());
        assert!(LinearSystem::named(Family::KCube { k: 1 }).is_err());
    }

    #[test]
    fn named_families_are_admissible() {
        let mut families = vec![
            Family::Sidon,
            Family::SumFree,
            Family::M1,
            Family::M2,
            Family::ThreeFour,
        ];
        families.extend((3..=8).map(|k| Family::KAp { k }));
        families.extend((1..=5).map(|k| Family::KSumFree { k }));
        families.extend((2..=6).map(|k| Family::KBarycentric { k }));
        families.extend((2..=4).map(|k| Family::KCube { k }));
        for h in 2..=4 {
            for g in 1..=3 {
                families.push(Family::Bhg { h, g });
            }
        }
        for family in families {
            let s = LinearSystem::named(family).unwrap();
            assert!(s.is_admissible(), "{family}: {:?}", s.admissibility());
        }
    }

    #[test]
    fn k_ap_kernel_is_two_dimensional() {
        for k in 3..=8 {
            let s = LinearSystem::named(Family::KAp { k }).unwrap();
            assert_eq!(s.matrix().rank(), k - 2);
            assert_eq!(s.matrix().kernel_basis().len(), 2);
        }
    }

    #[test]
    fn cube_degrees_of_freedom() {
        for k in 2..=4 {
            let s = LinearSystem::named(Family::KCube { k }).unwrap();
            assert_eq!(s.m() - s.r(), k + 1);
        }
    }

    #[test]
    fn violation_messages() {
        let redundant = sys(&[&[1, -1]]);
        assert_eq!(
            redundant.admissibility().violation().unwrap(),
            "irredundancy violated (pair 1,2)"
        );
        assert!(sys(&[&[1, 1]])
            .admissibility()
            .violation()
            .unwrap()
            .contains("positivity"));
        assert!(LinearSystem::named(Family::Sidon)
            .unwrap()
            .admissibility()
            .violation()
            .is_none());
    }

    #[test]
    fn text_and_json_formats() {
        let s = LinearSystem::parse("2 3\n1 -2 1\n0 1 -1\n").unwrap();
        assert_eq!(s.integer_rows(), &[vec![1, -2, 1], vec![0, 1, -1]]);
        assert_eq!(LinearSystem::parse(&s.to_text()).unwrap(), s);
        let j = LinearSystem::parse(r#"{"name": "sidon", "rows": [[1, 1, -1, -1]]}"#).unwrap();
        assert_eq!(j.name(), Some("sidon"));
        assert_eq!(j.m(), 4);
        for bad in [
            "",
            "1 3\n1 2\n",
            "2 2\n1 1\n",
            "1 2\n1 x\n",
            "1 2\n1 1\n1 1\n",
            "x",
        ] {
            assert!(LinearSystem::parse(bad).is_err(), "{bad:?}");
        }
        assert!(LinearSystem::parse(r#"{"rows": [[1, 2], [1]]}"#).is_err());
    }

    #[test]
    fn brute_force_irredundancy_oracle() {
        // A pair is separated iff some solution in {1..10}^m differs on it.
        let systems = [
            sys(&[&[1, 1, -1, -1]]),
            sys(&[&[1, -2, 1]]),
            sys(&[&[1, -1, 0]]),
            sys(&[&[1, 1, -2]]),
            sys(&[&[1, -1, 0, 0], &[0, 1, -1, 0]]),
            sys(&[&[1, 1, -1, 0], &[0, 0, 1, -1]]),
        ];
        for s in &systems {
            let m = s.m();
            let mut separated = vec![vec![false; m]; m];
            let mut x = vec![1i64; m];
            'outer: loop {
                if s.is_solution(&x) {
                    for i in 0..m {
                        for j in i + 1..m {
                            if x[i] != x[j] {
                                separated[i][j] = true;
                            }
                        }
                    }
                }
                for c in 0..m {
                    if x[c] < 10 {
                        x[c] += 1;
                        continue 'outer;
                    }
                    x[c] = 1;
                }
                break;
            }
            let oracle = (0..m)
                .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .find(|&(i, j)| !separated[i][j]);
            assert_eq!(
                check_irredundancy(s.matrix()),
                oracle,
                "{:?}",
                s.integer_rows()
            );
        }
    }
}
