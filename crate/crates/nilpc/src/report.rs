//! JSON renderings of library values. Field order is fixed by construction.

use nilpc_core::bilinear::{BilinearMap, GapAction, ScalarRing, Triple};
use nilpc_core::deformation::{AdaptedPresentation, DeformationParams, ExtClass};
use nilpc_core::linalg::IntMatrix;
use nilpc_core::morphism::InvariantReport;
use nilpc_core::section::AbelianSection;
use nilpc_core::series::{KeySubgroups, SeriesChain};
use nilpc_core::{BigInt, Period, Subgroup};
use serde_json::{json, Map, Value};

use crate::format::{element_value, int_value, map_value, presentation_value};

pub fn period_value(p: &Period) -> Value {
    int_value(&p.code())
}

pub fn periods_value(ps: &[Period]) -> Value {
    Value::Array(ps.iter().map(period_value).collect())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

pub fn subgroup_value(s: &Subgroup) -> Value {
    Value::Array(s.rows().iter().map(element_value).collect())
}

pub fn section_value(s: &AbelianSection) -> Value {
    json!({
        "periods": periods_value(s.periods()),
        "basis": Value::Array(s.basis().iter().map(element_value).collect()),
    })
}

pub fn chain_value(c: &SeriesChain) -> Value {
    json!({
        "central": c.central,
        "terms": Value::Array(c.terms.iter().map(subgroup_value).collect()),
    })
}

pub fn key_value(k: &KeySubgroups) -> Value {
    json!({
        "derived": subgroup_value(&k.derived),
        "isolator_of_derived": subgroup_value(&k.iso_derived),
        "center": subgroup_value(&k.center),
        "i": subgroup_value(&k.ig),
        "n": subgroup_value(&k.ng),
        "m": subgroup_value(&k.mg),
        "addition": subgroup_value(&k.addition),
        "mn_invariants": periods_value(&k.mn_invariants),
        "mn_order": int_value(&k.mn_order()),
        "regular": k.is_regular(),
        "tame": k.is_tame(),
    })
}

pub fn invariants_value(r: &InvariantReport) -> Value {
    json!({
        "hirsch": r.hirsch,
        "class": r.class,
        "ab_invariants": periods_value(&r.ab_invariants),
        "mn_order": int_value(&r.mn_order),
        "p": r.p,
        "n": r.n,
        "e": int_value(&r.e),
        "regular": r.regular,
        "tame": r.tame,
    })
}

fn triple_value(t: &Triple) -> Value {
    json!({
        "phi1": matrix_value(&t.phi1),
        "phi2": matrix_value(&t.phi2),
        "phi0": matrix_value(&t.phi0),
    })
}

pub fn ring_value(r: &ScalarRing, with_basis: bool) -> Value {
    let mut m = Map::new();
    m.insert("periods".into(), periods_value(r.periods()));
    m.insert("unit".into(), ints(r.unit()));
    m.insert(
        "structure_constants".into(),
        Value::Array(
            r.structure_constants()
                .iter()
                .map(|row| Value::Array(row.iter().map(|c| ints(c)).collect()))
                .collect(),
        ),
    );
    m.insert("commutative".into(), Value::from(r.is_commutative()));
    m.insert("associative".into(), Value::from(r.is_associative()));
    if with_basis {
        m.insert("basis".into(), Value::Array(r.basis().iter().map(triple_value).collect()));
    }
    Value::Object(m)
}

pub fn bilinear_value(f: &BilinearMap) -> Value {
    let mut values = Vec::new();
    for i in 0..f.left().dim() {
        for j in 0..f.right().dim() {
            let v = f.value(i, j);
            if v.iter().any(|x| x != &BigInt::from(0)) {
                values.push(json!({ "left": i + 1, "right": j + 1, "value": ints(v) }));
            }
        }
    }
    json!({
        "left": periods_value(f.left().periods()),
        "right": periods_value(f.right().periods()),
        "values_in": periods_value(f.value_group().periods()),
        "table": values,
    })
}

pub fn action_value(a: &GapAction) -> Value {
    json!({
        "gap": a.gap,
        "periods": periods_value(&a.periods),
        "matrices": Value::Array(a.matrices.iter().map(matrix_value).collect()),
    })
}

pub fn adapted_value(name: &str, a: &AdaptedPresentation) -> Value {
    json!({
        "i0": a.i0,
        "i1": a.i1,
        "i2": a.i2,
        "n": a.n(),
        "p": a.p(),
        "e": int_value(&a.e()),
        "presentation": presentation_value(name, &a.pres),
        "to_adapted": map_value(a.to_adapted.images()),
        "from_adapted": map_value(a.from_adapted.images()),
    })
}

pub fn params_value(p: &DeformationParams) -> Value {
    json!({
        "d": ints(&p.d),
        "c": Value::Array(p.c.iter().map(|r| ints(r)).collect()),
    })
}

pub fn class_value(c: &ExtClass) -> Value {
    json!({
        "moduli": ints(&c.moduli),
        "components": Value::Array(c.components.iter().map(|r| ints(r)).collect()),
    })
}
