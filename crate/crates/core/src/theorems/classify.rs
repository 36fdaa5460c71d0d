use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::coefficients::FieldDescriptor;
use crate::exponents::GroupDescriptor;
use crate::supports::{
    check_all_conditions, family_contains, CheckBudget, Condition, FamilyDescriptor, Membership, SupportSet,
    Verdict, Witness,
};

use Condition::*;

const GROUP_SET: [Condition; 3] = [S2, S3, S5];
const RING_SET: [Condition; 4] = [S2, S3, S5, A2];
const RAYNER_RING_SET: [Condition; 5] = [S2, S3, S5, A3, A4];
const RAYNER_SET: [Condition; 6] = [S2, S3, S5, A1, A3, A4];
const FIELD_SET: [Condition; 6] = [S2, S3, S4, A2, A4, A5];
const HAHN_SET: [Condition; 5] = [S1, S2, S3, A2, A4];

/// Three-valued answer for one structural property of a k-hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    /// Established by the named rule.
    Yes(String),
    /// Refuted by the named rule, with the failing conditions that support it.
    No { rule: String, failed: Vec<(Condition, Witness)> },
    /// The available rules do not decide the property; the reason names the
    /// missing assumption or the inconclusive check.
    Unknown(String),
}

impl Flag {
    pub fn is_yes(&self) -> bool {
        matches!(self, Flag::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Flag::No { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Flag::Unknown(_))
    }

    fn no(rule: &str, failed: Vec<(Condition, Witness)>) -> Self {
        Flag::No { rule: rule.to_string(), failed }
    }

    fn yes(rule: &str) -> Self {
        Flag::Yes(rule.to_string())
    }

    pub fn to_json(&self) -> Value {
        match self {
            Flag::Yes(rule) => json!({"value": "yes", "rule": rule}),
            Flag::No { rule, failed } => json!({
                "value": "no",
                "rule": rule,
                "failed": failed
                    .iter()
                    .map(|(c, w)| json!({"condition": c.to_string(), "witness": w.to_json()}))
                    .collect::<Vec<_>>(),
            }),
            Flag::Unknown(reason) => json!({"value": "unknown", "reason": reason}),
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::Yes(rule) => write!(f, "yes ({rule})"),
            Flag::No { rule, failed } => {
                write!(f, "no ({rule})")?;
                for (c, w) in failed {
                    write!(f, "; {c}: {w}")?;
                }
                Ok(())
            }
            Flag::Unknown(reason) => write!(f, "unknown ({reason})"),
        }
    }
}

/// Facts about the coefficient field that the characterisations depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assumptions {
    pub char_k: u64,
    pub k_is_f2: bool,
    /// `k` is at least as large as every well-ordered subset of `G`. Declared
    /// for the infinite fields `Q` and `F_p(x)`, since every support handled
    /// here is countable.
    pub k_large: bool,
}

impl Assumptions {
    pub fn of(field: FieldDescriptor) -> Self {
        Assumptions { char_k: field.characteristic(), k_is_f2: field.is_f2(), k_large: field.is_large() }
    }

    fn char_zero(&self) -> bool {
        self.char_k == 0
    }

    pub fn to_json(&self) -> Value {
        json!({"char_k": self.char_k, "k_is_F2": self.k_is_f2, "k_large": self.k_large})
    }
}

/// Structural properties of the k-hull `k((F))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub group: GroupDescriptor,
    pub field: FieldDescriptor,
    pub family: FamilyDescriptor,
    pub additive_subgroup: Flag,
    pub subring: Flag,
    /// Whether the hull contains the constants `k`.
    pub has_identity: Flag,
    pub subfield: Flag,
    pub hahn_field: Flag,
    pub rayner_field: Flag,
    pub restriction_closed: Flag,
    pub truncation_closed: Flag,
    pub assumptions: Assumptions,
    pub conditions: Vec<(Condition, Verdict)>,
}

impl Classification {
    /// Flags by name, in a fixed order.
    pub fn flags(&self) -> [(&'static str, &Flag); 8] {
        [
            ("additive_subgroup", &self.additive_subgroup),
            ("subring", &self.subring),
            ("has_identity", &self.has_identity),
            ("subfield", &self.subfield),
            ("hahn_field", &self.hahn_field),
            ("rayner_field", &self.rayner_field),
            ("restriction_closed", &self.restriction_closed),
            ("truncation_closed", &self.truncation_closed),
        ]
    }

    pub fn verdict(&self, c: Condition) -> &Verdict {
        &self.conditions.iter().find(|(d, _)| *d == c).expect("all conditions are checked").1
    }

    pub fn to_json(&self) -> Value {
        let flags: BTreeMap<&str, Value> = self.flags().iter().map(|(n, f)| (*n, f.to_json())).collect();
        let conditions: BTreeMap<String, Value> =
            self.conditions.iter().map(|(c, v)| (c.to_string(), v.to_json())).collect();
        json!({
            "group": self.group.to_string(),
            "field": self.field.to_string(),
            "family": self.family.to_string(),
            "flags": flags,
            "assumptions": self.assumptions.to_json(),
            "conditions": conditions,
        })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k-hull of {} over {} with G = {}", self.family, self.field, self.group)?;
        for (name, flag) in self.flags() {
            writeln!(f, "  {name}: {flag}")?;
        }
        Ok(())
    }
}

/// How a set of conditions fared.
struct SetOutcome {
    failed: Vec<(Condition, Witness)>,
    unknown: Vec<(Condition, String)>,
}

impl SetOutcome {
    fn holds(&self) -> bool {
        self.failed.is_empty() && self.unknown.is_empty()
    }

    fn fails(&self) -> bool {
        !self.failed.is_empty()
    }

    fn unknown_reason(&self) -> String {
        let parts: Vec<String> = self.unknown.iter().map(|(c, r)| format!("{c}: {r}")).collect();
        parts.join("; ")
    }
}

struct Checks<'a>(&'a [(Condition, Verdict)]);

impl Checks<'_> {
    fn outcome(&self, set: &[Condition]) -> SetOutcome {
        let mut out = SetOutcome { failed: Vec::new(), unknown: Vec::new() };
        for &c in set {
            match &self.0.iter().find(|(d, _)| *d == c).expect("all conditions are checked").1 {
                Verdict::Holds(_) => {}
                Verdict::Fails(w) => out.failed.push((c, w.clone())),
                Verdict::Unknown(r) => out.unknown.push((c, r.clone())),
            }
        }
        out
    }
}

fn failures_of(flag: &Flag) -> Vec<(Condition, Witness)> {
    match flag {
        Flag::No { failed, .. } => failed.clone(),
        _ => Vec::new(),
    }
}

fn decide_set(out: &SetOutcome, rule_yes: &str, rule_no: &str) -> Flag {
    if out.fails() {
        Flag::no(rule_no, out.failed.clone())
    } else if out.holds() {
        Flag::yes(rule_yes)
    } else {
        Flag::Unknown(out.unknown_reason())
    }
}

/// Classifies `k((F))` as an additive group, ring, field, Hahn field and
/// Rayner field, applying each characterisation only under its hypotheses on
/// `k`.
pub fn classify_khull(
    group: GroupDescriptor,
    field: FieldDescriptor,
    family: &FamilyDescriptor,
    budget: &CheckBudget,
) -> Classification {
    let conditions = check_all_conditions(group, family, budget);
    let assumptions = Assumptions::of(field);
    let checks = Checks(&conditions);
    let max_len = budget.monoid_search_length;

    let empty_member = family_contains(family, &SupportSet::empty(), max_len);
    let zero_member = family_contains(family, &SupportSet::singleton(group.zero()), max_len);

    let group_out = checks.outcome(&GROUP_SET);
    let mut additive_subgroup = if group_out.holds() {
        Flag::yes("subsets, unions and a nonempty family give an additive group")
    } else if empty_member.is_non_member() {
        Flag::no("the zero series needs the empty support", group_out.failed.clone())
    } else if group_out.fails() && !assumptions.k_is_f2 {
        Flag::no("additive group criterion for k other than F2", group_out.failed.clone())
    } else if group_out.fails() {
        Flag::Unknown("k_is_F2: the additive group criterion needs k other than F2".to_string())
    } else {
        Flag::Unknown(group_out.unknown_reason())
    };

    let ring_out = checks.outcome(&RING_SET);
    let mut subring = if additive_subgroup.is_no() {
        Flag::no("a subring is an additive group", failures_of(&additive_subgroup))
    } else if ring_out.holds() {
        Flag::yes("subsets, unions, nonempty family and sums give a subring")
    } else if checks.outcome(&RAYNER_RING_SET).holds() {
        Flag::yes("subsets, unions, nonempty family, translations and finite sums give a subring")
    } else if ring_out.fails() && (assumptions.char_zero() || assumptions.k_large) {
        Flag::no("subring criterion for char_k = 0 or k_large", ring_out.failed.clone())
    } else if let Flag::Unknown(reason) = &additive_subgroup {
        Flag::Unknown(reason.clone())
    } else if ring_out.fails() {
        Flag::Unknown("the subring criterion needs char_k = 0 or k_large".to_string())
    } else {
        Flag::Unknown(ring_out.unknown_reason())
    };

    let has_identity = match (empty_member, zero_member) {
        (Membership::Yes, Membership::Yes) => {
            Flag::yes("the empty set and {0} are members, so k is contained")
        }
        (e, z) if e.is_non_member() || z.is_non_member() => Flag::no(
            "k is contained only if the empty set and {0} are members",
            [(S5, e), (S4, z)]
                .into_iter()
                .filter(|(_, m)| m.is_non_member())
                .map(|(c, _)| {
                    let required =
                        if c == S5 { SupportSet::empty() } else { SupportSet::singleton(group.zero()) };
                    (c, Witness::Missing { required, members: Vec::new(), shift: None })
                })
                .collect(),
        ),
        _ => Flag::Unknown("membership of the empty set or {0} is undecided".to_string()),
    };

    let rayner_out = checks.outcome(&RAYNER_SET);
    let field_out = checks.outcome(&FIELD_SET);
    let s4 = checks.outcome(&[S4]);
    let mut subfield = if rayner_out.holds() {
        Flag::yes("Rayner field conditions give a subfield")
    } else if field_out.holds() {
        Flag::yes("subsets, unions, {0}, sums, finite sums and negatives give a subfield")
    } else if s4.fails() {
        Flag::no("a subfield contains 1, so {0} must be a member", s4.failed.clone())
    } else if subring.is_no() {
        Flag::no("a subfield is a subring", failures_of(&subring))
    } else if assumptions.char_zero() && field_out.fails() {
        Flag::no("subfield criterion in characteristic 0", field_out.failed.clone())
    } else if field_out.fails() {
        Flag::Unknown("the subfield criterion needs char_k = 0".to_string())
    } else {
        Flag::Unknown(field_out.unknown_reason())
    };

    let hahn_out = checks.outcome(&HAHN_SET);
    let s1 = checks.outcome(&[S1]);
    let hahn_field = if hahn_out.holds() {
        Flag::yes("singletons, subsets, unions, sums and finite sums give a Hahn field")
    } else if rayner_out.holds() {
        Flag::yes("every Rayner field is a Hahn field")
    } else if s1.fails() {
        Flag::no("a Hahn field contains every monomial", s1.failed.clone())
    } else if subfield.is_no() {
        Flag::no("a Hahn field is a subfield", failures_of(&subfield))
    } else if assumptions.char_zero() && hahn_out.fails() {
        Flag::no("Hahn field criterion in characteristic 0", hahn_out.failed.clone())
    } else if hahn_out.fails() {
        Flag::Unknown("the Hahn field criterion needs char_k = 0".to_string())
    } else {
        Flag::Unknown(hahn_out.unknown_reason())
    };

    let rayner_field = decide_set(&rayner_out, "Rayner field conditions", "Rayner field conditions");
    let restriction_closed =
        decide_set(&checks.outcome(&[S2]), "subsets of members are members", "restriction closure");
    let truncation_closed =
        decide_set(&checks.outcome(&[S6]), "initial segments of members are members", "truncation closure");

    // Each structure includes the weaker ones.
    if hahn_field.is_yes() && !subfield.is_yes() {
        debug_assert!(!subfield.is_no(), "a Hahn field refuted as a subfield");
        subfield = Flag::yes("a Hahn field is a subfield");
    }
    if subfield.is_yes() && !subring.is_yes() {
        debug_assert!(!subring.is_no(), "a subfield refuted as a subring");
        subring = Flag::yes("a subfield is a subring");
    }
    if subring.is_yes() && !additive_subgroup.is_yes() {
        debug_assert!(!additive_subgroup.is_no(), "a subring refuted as a group");
        additive_subgroup = Flag::yes("a subring is an additive group");
    }

    Classification {
        group,
        field,
        family: family.clone(),
        additive_subgroup,
        subring,
        has_identity,
        subfield,
        hahn_field,
        rayner_field,
        restriction_closed,
        truncation_closed,
        assumptions,
        conditions,
    }
}
