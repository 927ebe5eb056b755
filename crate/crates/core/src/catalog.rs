//! Standard scenarios and models used as fixtures.

use num_traits::Zero;

use crate::algebra::Semiring;
use crate::error::{Error, Result};
use crate::kspec::VectorFamily;
use crate::model::EmpiricalModel;
use crate::rational::{rat, Rational};
use crate::scenario::{Scenario, Section};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub scenario: Scenario,
    pub model: Option<EmpiricalModel>,
    pub provenance: String,
}

impl CatalogEntry {
    fn scenario_only(name: &str, scenario: Scenario, provenance: &str) -> Self {
        CatalogEntry { name: name.into(), scenario, model: None, provenance: provenance.into() }
    }

    fn with_model(name: &str, model: EmpiricalModel, provenance: &str) -> Self {
        CatalogEntry {
            name: name.into(),
            scenario: model.scenario().clone(),
            model: Some(model),
            provenance: provenance.into(),
        }
    }

    /// The model, for entries that carry one.
    pub fn expect_model(&self) -> &EmpiricalModel {
        self.model.as_ref().unwrap_or_else(|| panic!("catalog entry `{}` has no model", self.name))
    }
}

/// Two parties, measurements `a, a'` and `b, b'`, binary outcomes.
pub fn chsh_scenario() -> Scenario {
    Scenario::bell(&[vec!["a", "a'"], vec!["b", "b'"]], &["0", "1"]).expect("fixed scenario")
}

/// `n` parties with `k` measurements each and `l` outcomes; measurement `j`
/// of party `i` is labelled `m{i}_{j}`.
pub fn bell_scenario(n: usize, k: usize, l: usize) -> Result<Scenario> {
    if n == 0 || k == 0 || l == 0 {
        return Err(Error::InvalidArgument("n, k and l must be positive".into()));
    }
    let parts: Vec<Vec<String>> = (1..=n).map(|i| (1..=k).map(|j| format!("m{i}_{j}")).collect()).collect();
    let outcomes: Vec<String> = (0..l).map(|o| o.to_string()).collect();
    Scenario::bell(&parts, &outcomes)
}

fn rows(entries: &[[(i64, i64); 4]]) -> Vec<Vec<Rational>> {
    entries.iter().map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect()).collect()
}

pub fn bell() -> CatalogEntry {
    let table = rows(&[
        [(1, 2), (0, 1), (0, 1), (1, 2)],
        [(3, 8), (1, 8), (1, 8), (3, 8)],
        [(3, 8), (1, 8), (1, 8), (3, 8)],
        [(1, 8), (3, 8), (3, 8), (1, 8)],
    ]);
    let model = EmpiricalModel::from_rows(chsh_scenario(), Semiring::NonNegative, table).expect("compatible table");
    CatalogEntry::with_model("bell", model, "two-party binary Bell table realizable with a maximally entangled state")
}

pub fn hardy_support() -> CatalogEntry {
    let model = EmpiricalModel::from_support(chsh_scenario(), &[&[1, 1, 1, 1], &[0, 1, 1, 1], &[0, 1, 1, 1], &[1, 1, 1, 0]])
        .expect("compatible support");
    CatalogEntry::with_model("hardy", model, "possibilistic Hardy model (support only)")
}

/// One probabilistic model with the Hardy support. Any other completion has
/// the same possibilistic verdicts; this one just has small denominators.
pub fn hardy_completion() -> CatalogEntry {
    let table = rows(&[
        [(1, 16), (1, 16), (1, 16), (13, 16)],
        [(0, 1), (1, 8), (3, 4), (1, 8)],
        [(0, 1), (3, 4), (1, 8), (1, 8)],
        [(1, 2), (1, 4), (1, 4), (0, 1)],
    ]);
    let model = EmpiricalModel::from_rows(chsh_scenario(), Semiring::NonNegative, table).expect("compatible table");
    CatalogEntry::with_model("hardy-probabilistic", model, "a rational probabilistic completion of the Hardy support")
}

/// PR box variant `v = α + 2β + 4γ` obeys `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`,
/// where `x = 1` for `a'` and `y = 1` for `b'`. Variant 0 anti-correlates on `(a', b')` only.
pub fn pr_box(variant: u8) -> Result<CatalogEntry> {
    if variant > 7 {
        return Err(Error::InvalidArgument(format!("PR box variant {variant} is outside 0..=7")));
    }
    let (alpha, beta, gamma) = (variant & 1, variant >> 1 & 1, variant >> 2 & 1);
    let scenario = chsh_scenario();
    let mut table = Vec::new();
    for (x, y) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let parity = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
        let row: Vec<Rational> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(a, b)| if a ^ b == parity { rat(1, 2) } else { Rational::zero() })
            .collect();
        table.push(row);
    }
    let model = EmpiricalModel::from_rows(scenario, Semiring::NonNegative, table)?;
    Ok(CatalogEntry::with_model(&format!("pr{variant}"), model, "Popescu-Rohrlich box, outcome relabelling variant"))
}

/// Parties `[X_i, Y_i]`, `i = 1..=n`, binary outcomes.
pub fn ghz_scenario(n: usize) -> Result<Scenario> {
    if n < 2 {
        return Err(Error::InvalidArgument("GHZ scenarios need n ≥ 2".into()));
    }
    let parts: Vec<Vec<String>> = (1..=n).map(|i| vec![format!("X{i}"), format!("Y{i}")]).collect();
    Scenario::bell(&parts, &["0".to_string(), "1".to_string()])
}

/// GHZ(n): contexts with an odd number of `Y`s are uniform; otherwise the
/// support is the outcomes with an even number of 1s when `#Y ≡ 0 (mod 4)`
/// and an odd number when `#Y ≡ 2 (mod 4)`, each with weight `2^(1−n)`.
pub fn ghz(n: usize) -> Result<CatalogEntry> {
    if n < 3 {
        return Err(Error::InvalidArgument("GHZ models need n ≥ 3".into()));
    }
    let scenario = ghz_scenario(n)?;
    let mut table = Vec::new();
    for context in scenario.cover() {
        let ys = context.iter().filter(|&&m| m % 2 == 1).count();
        let row: Vec<Rational> = scenario
            .sections(context)
            .iter()
            .map(|s| {
                let ones = s.values().iter().filter(|&&v| v == 1).count();
                match ys % 4 {
                    1 | 3 => rat(1, 1 << n),
                    0 if ones % 2 == 0 => rat(1, 1 << (n - 1)),
                    2 if ones % 2 == 1 => rat(1, 1 << (n - 1)),
                    _ => Rational::zero(),
                }
            })
            .collect();
        table.push(row);
    }
    let model = EmpiricalModel::from_rows(scenario, Semiring::NonNegative, table)?;
    Ok(CatalogEntry::with_model(&format!("ghz{n}"), model, "GHZ state measured with local X and Y"))
}

pub fn peres_mermin_cover() -> CatalogEntry {
    let m = ["A", "B", "C", "D", "E", "F", "G", "H", "I"];
    let cover = vec![
        vec!["A", "B", "C"],
        vec!["D", "E", "F"],
        vec!["G", "H", "I"],
        vec!["A", "D", "G"],
        vec!["B", "E", "H"],
        vec!["C", "F", "I"],
    ];
    let scenario = Scenario::new(&m, &["0", "1"], &cover).expect("fixed cover");
    CatalogEntry::scenario_only("peres-mermin", scenario, "Peres-Mermin square: rows and columns")
}

pub const CABELLO18_CONTEXTS: [[&str; 4]; 9] = [
    ["m1", "m2", "m3", "m4"],
    ["m1", "m5", "m6", "m7"],
    ["m8", "m9", "m3", "m10"],
    ["m8", "m11", "m7", "m12"],
    ["m2", "m5", "m13", "m14"],
    ["m9", "m11", "m14", "m15"],
    ["m16", "m17", "m4", "m10"],
    ["m16", "m18", "m6", "m12"],
    ["m17", "m18", "m13", "m15"],
];

pub fn cabello18_cover() -> CatalogEntry {
    let m: Vec<String> = (1..=18).map(|i| format!("m{i}")).collect();
    let cover: Vec<Vec<String>> =
        CABELLO18_CONTEXTS.iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect();
    let outcomes = ["0".to_string(), "1".to_string()];
    let scenario = Scenario::new(&m, &outcomes, &cover).expect("fixed cover");
    CatalogEntry::scenario_only("cabello18", scenario, "18 rays in four dimensions, 9 orthogonal bases")
}

pub const CABELLO18_VECTORS: &str = include_str!("../data/cabello18.vectors");

/// An integer realization of the 18-ray cover.
pub fn cabello18_vectors() -> VectorFamily {
    VectorFamily::parse(CABELLO18_VECTORS).expect("bundled vector file parses")
}

pub fn triangle_cover() -> CatalogEntry {
    let scenario = Scenario::new(&["a", "b", "c"], &["0", "1"], &[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]])
        .expect("fixed cover");
    CatalogEntry::scenario_only("triangle", scenario, "three pairwise-compatible measurements, no joint context")
}

/// A product model on `scenario`: measurement `m` has distribution `factors[m]`.
pub fn product_model(scenario: Scenario, factors: &[Vec<Rational>]) -> Result<EmpiricalModel> {
    let l = scenario.outcome_count();
    let singles = factors
        .iter()
        .enumerate()
        .map(|(m, w)| crate::algebra::Distribution::from_rationals(Semiring::NonNegative, vec![m], l, w.clone()))
        .collect::<Result<Vec<_>>>()?;
    EmpiricalModel::product(scenario, &singles)
}

/// The witness `{a=1, a'=0, b=1, b'=0}` on the two-party scenario.
pub fn hardy_witness() -> Section {
    Section::new(vec![0, 1, 2, 3], vec![1, 0, 1, 0])
}

pub fn names() -> Vec<String> {
    let mut names: Vec<String> = ["bell", "hardy", "hardy-probabilistic"].iter().map(|s| s.to_string()).collect();
    names.extend((0..8).map(|v| format!("pr{v}")));
    names.extend((3..=6).map(|n| format!("ghz{n}")));
    names.extend(["peres-mermin", "cabello18", "triangle"].iter().map(|s| s.to_string()));
    names
}

pub fn by_name(name: &str) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownCatalogEntry(name.to_string());
    match name {
        "bell" => Ok(bell()),
        "hardy" => Ok(hardy_support()),
        "hardy-probabilistic" => Ok(hardy_completion()),
        "peres-mermin" => Ok(peres_mermin_cover()),
        "cabello18" => Ok(cabello18_cover()),
        "triangle" => Ok(triangle_cover()),
        _ => {
            if let Some(v) = name.strip_prefix("pr") {
                pr_box(v.parse().map_err(|_| unknown())?)
            } else if let Some(n) = name.strip_prefix("ghz") {
                ghz(n.parse().map_err(|_| unknown())?)
            } else {
                Err(unknown())
            }
        }
    }
}

/// Every model-bearing entry with a compatible probabilistic or boolean model.
pub fn models() -> Vec<CatalogEntry> {
    names()
        .into_iter()
        .filter_map(|n| by_name(&n).ok())
        .filter(|e| e.model.is_some())
        .collect()
}
