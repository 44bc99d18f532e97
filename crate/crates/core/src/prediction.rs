//! Probability that a candidate is the unique winner when the set of
//! participating voters (or candidates) is random.
//!
//! With `P(i)` the chance that exactly `i` members of the pool take part and
//! `Q(i)` the fraction of size-`i` subsets that make the candidate win, the
//! answer is `Σ_i P(i)·Q(i)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::candidates::CandidateId;
use crate::control::{Action, ControlInstance, Mode, Problem};
use crate::count::{binomial, Count};
use crate::counters::{AlgorithmTag, Dispatcher};
use crate::election::Election;
use crate::error::{Error, Result};
use crate::oracle::outcome;
use crate::rules::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Uncertain {
    Voters,
    Candidates,
}

impl Uncertain {
    pub fn as_str(self) -> &'static str {
        match self {
            Uncertain::Voters => "voters",
            Uncertain::Candidates => "candidates",
        }
    }

    fn action(self) -> Action {
        match self {
            Uncertain::Voters => Action::AddVoters,
            Uncertain::Candidates => Action::AddCandidates,
        }
    }
}

impl fmt::Display for Uncertain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Uncertain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "voters" => Ok(Uncertain::Voters),
            "candidates" => Ok(Uncertain::Candidates),
            _ => Err(Error::InvalidTurnout(format!("unknown uncertainty `{s}`, expected voters or candidates"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TurnoutKind {
    ExplicitTable,
    Bernoulli,
}

/// Distribution of the number of pool members that participate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnoutModel {
    kind: TurnoutKind,
    table: Vec<BigRational>,
    bernoulli_q: Option<BigRational>,
}

impl TurnoutModel {
    /// `table[i]` is the probability that exactly `i` join.
    pub fn table(table: Vec<BigRational>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidTurnout("empty turnout table".into()));
        }
        if let Some((i, p)) = table.iter().enumerate().find(|(_, p)| p.is_negative()) {
            return Err(Error::InvalidTurnout(format!("P({i}) = {p} is negative")));
        }
        let total: BigRational = table.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidTurnout(format!("probabilities sum to {total}, not 1")));
        }
        Ok(TurnoutModel { kind: TurnoutKind::ExplicitTable, table, bernoulli_q: None })
    }

    /// Independent participation with a probability per pool member.
    ///
    /// Only a common probability is supported; it becomes a binomial table.
    pub fn per_member(probs: &[BigRational]) -> Result<Self> {
        match probs.first() {
            None => binomial_table(0, BigRational::zero()),
            Some(q) if probs.iter().all(|x| x == q) => binomial_table(probs.len(), q.clone()),
            Some(_) => Err(Error::InvalidTurnout(
                "heterogeneous per-member participation probabilities are not supported".into(),
            )),
        }
    }

    pub fn kind(&self) -> TurnoutKind {
        self.kind
    }

    pub fn probabilities(&self) -> &[BigRational] {
        &self.table
    }

    pub fn bernoulli_q(&self) -> Option<&BigRational> {
        self.bernoulli_q.as_ref()
    }

    /// Largest participation size with a table entry.
    pub fn pool_size(&self) -> usize {
        self.table.len() - 1
    }
}

/// `P(i) = C(n, i)·q^i·(1 − q)^(n − i)`.
pub fn binomial_table(n: usize, q: BigRational) -> Result<TurnoutModel> {
    if q.is_negative() || q > BigRational::one() {
        return Err(Error::InvalidTurnout(format!("participation probability {q} is outside [0, 1]")));
    }
    let r = BigRational::one() - &q;
    let table = (0..=n)
        .map(|i| {
            let c = BigRational::from_integer(BigInt::from(binomial(n, i)));
            c * pow(&q, i) * pow(&r, n - i)
        })
        .collect();
    Ok(TurnoutModel { kind: TurnoutKind::Bernoulli, table, bernoulli_q: Some(q) })
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Parses `num/den`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidTurnout(format!("`{s}` is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidTurnout(format!("`{s}` has a zero denominator")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = num_traits::pow(BigInt::from(10u8), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let value = BigRational::new(int * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

/// Decimal rendering rounded half-up to `digits` places.
pub fn render_decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), digits);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2u8))).floor().to_integer();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>digits$}", frac = frac.to_string())
    }
}

/// `num/den` in lowest terms, or just `num` for integers.
pub fn render_fraction(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn add_instance(election: &Election, rule: Rule, candidate: CandidateId, uncertain: Uncertain) -> Result<ControlInstance> {
    let problem = Problem::new(uncertain.action(), Mode::Constructive);
    let inst = ControlInstance::new(election.clone(), rule, problem, candidate, 0)?;
    Ok(inst.with_budget(inst.pool_size()))
}

fn check_model(model: &TurnoutModel, pool: usize) -> Result<()> {
    if model.pool_size() != pool {
        return Err(Error::InvalidTurnout(format!(
            "turnout table has {} entries, the pool needs {}",
            model.table.len(),
            pool + 1
        )));
    }
    Ok(())
}

fn ratio(count: &Count, pool: usize, i: usize) -> BigRational {
    let total = binomial(pool, i);
    if total.is_zero() {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(count.clone()), BigInt::from(total))
}

fn probability_with_tags(
    election: &Election,
    rule: Rule,
    candidate: CandidateId,
    model: &TurnoutModel,
    uncertain: Uncertain,
    dispatcher: &Dispatcher,
    tags: &mut Vec<AlgorithmTag>,
) -> Result<BigRational> {
    let inst = add_instance(election, rule, candidate, uncertain)?;
    let pool = inst.pool_size();
    check_model(model, pool)?;
    let mut total = BigRational::zero();
    for (i, p) in model.table.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let q = dispatcher.count_exact_size(&inst, i)?;
        for tag in q.route.iter().chain([&q.algorithm]) {
            if !tags.contains(tag) {
                tags.push(*tag);
            }
        }
        total += p * ratio(&q.count, pool, i);
    }
    Ok(total)
}

/// `Σ_i P(i)·Q(i)` where `Q(i)` is the share of size-`i` participation sets
/// under which `candidate` is the unique winner.
pub fn victory_probability(
    election: &Election,
    rule: Rule,
    candidate: CandidateId,
    model: &TurnoutModel,
    uncertain: Uncertain,
    dispatcher: &Dispatcher,
) -> Result<BigRational> {
    probability_with_tags(election, rule, candidate, model, uncertain, dispatcher, &mut Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VictoryReport {
    pub uncertain: Uncertain,
    pub probabilities: Vec<(CandidateId, BigRational)>,
    /// Counters used for the `Q(i)` values, in first-use order.
    pub algorithms: Vec<AlgorithmTag>,
}

impl VictoryReport {
    pub fn total(&self) -> BigRational {
        self.probabilities.iter().map(|(_, p)| p).sum()
    }

    pub fn get(&self, c: CandidateId) -> Option<&BigRational> {
        self.probabilities.iter().find(|(d, _)| *d == c).map(|(_, p)| p)
    }
}

/// Victory probability of every registered candidate.
pub fn full_report(
    election: &Election,
    rule: Rule,
    model: &TurnoutModel,
    uncertain: Uncertain,
    dispatcher: &Dispatcher,
) -> Result<VictoryReport> {
    let mut algorithms = Vec::new();
    let probabilities = election
        .candidates()
        .iter()
        .map(|c| {
            probability_with_tags(election, rule, c, model, uncertain, dispatcher, &mut algorithms).map(|p| (c, p))
        })
        .collect::<Result<_>>()?;
    Ok(VictoryReport { uncertain, probabilities, algorithms })
}

/// Reference value: weights every participation set `S` by
/// `P(|S|) / C(pool, |S|)` and evaluates the winner directly.
pub fn exhaustive_probability(
    election: &Election,
    rule: Rule,
    candidate: CandidateId,
    model: &TurnoutModel,
    uncertain: Uncertain,
) -> Result<BigRational> {
    let inst = add_instance(election, rule, candidate, uncertain)?;
    let pool = inst.pool_size();
    check_model(model, pool)?;
    if pool >= 24 {
        return Err(Error::OracleCapExceeded { subsets: (BigUint::one() << pool).to_string(), cap: 1 << 24 });
    }
    let mut total = BigRational::zero();
    for mask in 0u32..1 << pool {
        let subset: Vec<usize> = (0..pool).filter(|&j| mask >> j & 1 == 1).collect();
        if outcome(&inst, &subset)? == Some(candidate) {
            total += ratio(&Count::one(), pool, subset.len()) * &model.table[subset.len()];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::BallotKind;
    use crate::counters::Strategy;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn example() -> Election {
        Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "c1"])
            .vote(&["c1", "p"])
            .unregistered_votes(2, &["p", "c1"])
            .build()
            .unwrap()
    }

    #[test]
    fn binomial_tables() {
        let t = binomial_table(2, r("1/2")).unwrap();
        assert_eq!(t.probabilities(), &[r("1/4"), r("1/2"), r("1/4")]);
        assert_eq!(t.kind(), TurnoutKind::Bernoulli);
        assert_eq!(binomial_table(3, r("0")).unwrap().probabilities(), &[r("1"), r("0"), r("0"), r("0")]);
        assert_eq!(binomial_table(2, r("1")).unwrap().probabilities(), &[r("0"), r("0"), r("1")]);
        assert!(binomial_table(2, r("3/2")).is_err());
        assert!(binomial_table(2, r("-1/2")).is_err());
    }

    #[test]
    fn tables_must_be_distributions() {
        assert!(TurnoutModel::table(vec![r("1/2"), r("1/4")]).is_err());
        assert!(TurnoutModel::table(vec![r("3/2"), r("-1/2")]).is_err());
        assert!(TurnoutModel::table(vec![]).is_err());
        assert!(TurnoutModel::table(vec![r("1/3"), r("2/3")]).is_ok());
    }

    #[test]
    fn heterogeneous_members_rejected() {
        assert!(matches!(TurnoutModel::per_member(&[r("1/2"), r("1/3")]), Err(Error::InvalidTurnout(_))));
        let same = TurnoutModel::per_member(&[r("1/2"), r("1/2")]).unwrap();
        assert_eq!(same, binomial_table(2, r("1/2")).unwrap());
    }

    #[test]
    fn rationals_parse_and_render() {
        assert_eq!(r("2/4"), BigRational::new(1.into(), 2.into()));
        assert_eq!(r("0.25"), r("1/4"));
        assert_eq!(r("-1.5"), r("-3/2"));
        assert_eq!(r("3"), r("3/1"));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
        assert_eq!(render_decimal(&r("1/4"), 6), "0.250000");
        assert_eq!(render_decimal(&r("2/3"), 6), "0.666667");
        assert_eq!(render_decimal(&r("1"), 2), "1.00");
        assert_eq!(render_decimal(&r("1/2"), 0), "1");
        assert_eq!(render_fraction(&r("6/8")), "3/4");
        assert_eq!(render_fraction(&r("2")), "2");
    }

    #[test]
    fn two_voter_example() {
        let e = example();
        let model = binomial_table(2, r("1/2")).unwrap();
        let d = Dispatcher::new(Strategy::Auto);
        let p = e.id("p").unwrap();
        assert_eq!(victory_probability(&e, Rule::Plurality, p, &model, Uncertain::Voters, &d).unwrap(), r("1/4"));
        let report = full_report(&e, Rule::Plurality, &model, Uncertain::Voters, &d).unwrap();
        let c1 = e.id("c1").unwrap();
        assert_eq!(report.get(c1).unwrap(), &exhaustive_probability(&e, Rule::Plurality, c1, &model, Uncertain::Voters).unwrap());
        assert_eq!(report.get(c1).unwrap(), &r("1/4"));
        assert!(report.total() <= BigRational::one());
        assert_eq!(report.algorithms, vec![AlgorithmTag::PluralityAvDp]);
    }

    #[test]
    fn point_mass_at_zero_is_status_quo() {
        let e = example();
        let model = TurnoutModel::table(vec![r("1"), r("0"), r("0")]).unwrap();
        let d = Dispatcher::new(Strategy::Auto);
        let report = full_report(&e, Rule::Plurality, &model, Uncertain::Voters, &d).unwrap();
        assert_eq!(report.get(e.id("p").unwrap()).unwrap(), &r("0"));
        assert_eq!(report.get(e.id("c1").unwrap()).unwrap(), &r("1"));
    }

    #[test]
    fn single_candidate_always_wins() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a"])
            .unregistered_votes(3, &["a"])
            .build()
            .unwrap();
        let model = binomial_table(3, r("1/3")).unwrap();
        let report = full_report(&e, Rule::Plurality, &model, Uncertain::Voters, &Dispatcher::new(Strategy::Auto)).unwrap();
        assert_eq!(report.probabilities, vec![(CandidateId(0), r("1"))]);
    }

    #[test]
    fn mirrored_profile_is_symmetric() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "b"])
            .vote(&["a", "b"])
            .vote(&["b", "a"])
            .unregistered_vote(&["a", "b"])
            .unregistered_vote(&["b", "a"])
            .build()
            .unwrap();
        let model = binomial_table(2, r("1/3")).unwrap();
        let report = full_report(&e, Rule::Condorcet, &model, Uncertain::Voters, &Dispatcher::new(Strategy::Auto)).unwrap();
        assert_eq!(report.probabilities[0].1, report.probabilities[1].1);
        // Exactly one extra voter breaks the tie.
        assert_eq!(report.probabilities[0].1, r("2/9"));
    }

    #[test]
    fn candidate_uncertainty_matches_enumeration() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a"])
            .unregistered_candidates(&["x", "y"])
            .vote(&["p", "x", "a", "y"])
            .vote(&["a", "y", "p", "x"])
            .vote(&["x", "p", "y", "a"])
            .build()
            .unwrap();
        let model = TurnoutModel::table(vec![r("1/6"), r("1/3"), r("1/2")]).unwrap();
        let d = Dispatcher::new(Strategy::Auto);
        for rule in [Rule::Plurality, Rule::Condorcet, Rule::Maximin] {
            let report = full_report(&e, rule, &model, Uncertain::Candidates, &d).unwrap();
            assert_eq!(report.probabilities.len(), 2);
            for (c, p) in &report.probabilities {
                assert_eq!(p, &exhaustive_probability(&e, rule, *c, &model, Uncertain::Candidates).unwrap());
            }
        }
    }

    #[test]
    fn model_size_must_match_pool() {
        let e = example();
        let model = binomial_table(3, r("1/2")).unwrap();
        let d = Dispatcher::new(Strategy::Auto);
        assert!(matches!(
            victory_probability(&e, Rule::Plurality, CandidateId(0), &model, Uncertain::Voters, &d),
            Err(Error::InvalidTurnout(_))
        ));
        assert!(matches!(
            victory_probability(&e, Rule::Plurality, CandidateId(0), &model, Uncertain::Candidates, &d),
            Err(Error::MissingPool(_))
        ));
    }
}
