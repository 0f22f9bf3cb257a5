//! JSON map specifications.
//!
//! ```text
//! {"type":"mobius","alpha":[re,im],"lambda":[re,im]}
//! {"type":"blaschke","lambda":[re,im],"zeros":[[re,im],...]}
//! {"type":"compose","outer":<spec>,"inner":<spec>}
//! {"type":"gallery","name":<string>,"params":{...}}
//! ```
//!
//! Gallery names: `half`, `scaled-exp` (`epsilon`, `c`), `slit-g`,
//! `slit-power` (`k`), `atomic-inner`, `frostman` (`base`, `a`), `escape` (`n`).

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::discmaps::{BlaschkeProduct, MobiusAutomorphism};
use crate::error::{Error, Result};
use crate::gallery;
use crate::map::DiscMapHandle;
use crate::numerics::ComplexPoint;

pub const GALLERY_NAMES: [&str; 7] = [
    "half",
    "scaled-exp",
    "slit-g",
    "slit-power",
    "atomic-inner",
    "frostman",
    "escape",
];

#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    Mobius {
        alpha: ComplexPoint,
        lambda: ComplexPoint,
    },
    Blaschke {
        lambda: ComplexPoint,
        zeros: Vec<ComplexPoint>,
    },
    Compose {
        outer: Box<MapSpec>,
        inner: Box<MapSpec>,
    },
    Gallery(GallerySpec),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GallerySpec {
    Half,
    ScaledExp { epsilon: f64, c: f64 },
    SlitG,
    SlitPower { k: u32 },
    AtomicInner,
    Frostman { base: Box<MapSpec>, a: ComplexPoint },
    Escape { n: u32 },
}

impl GallerySpec {
    pub fn name(&self) -> &'static str {
        match self {
            GallerySpec::Half => "half",
            GallerySpec::ScaledExp { .. } => "scaled-exp",
            GallerySpec::SlitG => "slit-g",
            GallerySpec::SlitPower { .. } => "slit-power",
            GallerySpec::AtomicInner => "atomic-inner",
            GallerySpec::Frostman { .. } => "frostman",
            GallerySpec::Escape { .. } => "escape",
        }
    }
}

pub fn complex_json(z: ComplexPoint) -> Value {
    json!([z.re, z.im])
}

impl MapSpec {
    pub fn to_json(&self) -> Value {
        match self {
            MapSpec::Mobius { alpha, lambda } => json!({
                "type": "mobius",
                "alpha": complex_json(*alpha),
                "lambda": complex_json(*lambda),
            }),
            MapSpec::Blaschke { lambda, zeros } => json!({
                "type": "blaschke",
                "lambda": complex_json(*lambda),
                "zeros": zeros.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            }),
            MapSpec::Compose { outer, inner } => json!({
                "type": "compose",
                "outer": outer.to_json(),
                "inner": inner.to_json(),
            }),
            MapSpec::Gallery(g) => {
                let mut obj = Map::new();
                obj.insert("type".into(), json!("gallery"));
                obj.insert("name".into(), json!(g.name()));
                let params = match g {
                    GallerySpec::ScaledExp { epsilon, c } => Some(json!({"epsilon": epsilon, "c": c})),
                    GallerySpec::SlitPower { k } => Some(json!({ "k": k })),
                    GallerySpec::Frostman { base, a } => Some(json!({"base": base.to_json(), "a": complex_json(*a)})),
                    GallerySpec::Escape { n } => Some(json!({ "n": n })),
                    GallerySpec::Half | GallerySpec::SlitG | GallerySpec::AtomicInner => None,
                };
                if let Some(p) = params {
                    obj.insert("params".into(), p);
                }
                Value::Object(obj)
            }
        }
    }

    pub fn parse_str(text: &str) -> Result<MapSpec> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::SpecParse {
            path: "$".into(),
            message: e.to_string(),
        })?;
        MapSpec::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<MapSpec> {
        parse_node(value, "$")
    }

    pub fn build(&self) -> Result<DiscMapHandle> {
        Ok(match self {
            MapSpec::Mobius { alpha, lambda } => DiscMapHandle::new(MobiusAutomorphism::new(*alpha, *lambda)?),
            MapSpec::Blaschke { lambda, zeros } => DiscMapHandle::new(BlaschkeProduct::new(*lambda, zeros.clone())?),
            MapSpec::Compose { outer, inner } => DiscMapHandle::compose(&outer.build()?, &inner.build()?),
            MapSpec::Gallery(g) => match g {
                GallerySpec::Half => gallery::make_half_map(),
                GallerySpec::ScaledExp { epsilon, c } => gallery::make_scaled_exponential(*epsilon, *c)?,
                GallerySpec::SlitG => gallery::make_slit_g(),
                GallerySpec::SlitPower { k } => gallery::make_slit_power(*k)?,
                GallerySpec::AtomicInner => gallery::make_atomic_inner(),
                GallerySpec::Frostman { base, a } => gallery::frostman_shift(&base.build()?, *a)?,
                GallerySpec::Escape { n } => gallery::make_escape_sequence(*n)?,
            },
        })
    }
}

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::SpecParse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| err(path, format!("missing field \"{key}\"")))
}

fn parse_complex(value: &Value, path: &str) -> Result<ComplexPoint> {
    let arr = value.as_array().ok_or_else(|| err(path, "expected [re, im]"))?;
    match arr.as_slice() {
        [re, im] => {
            let re = re.as_f64().ok_or_else(|| err(path, "real part is not a number"))?;
            let im = im.as_f64().ok_or_else(|| err(path, "imaginary part is not a number"))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(err(path, "expected exactly two numbers [re, im]")),
    }
}

fn parse_f64(obj: &Map<String, Value>, key: &str, default: f64, path: &str) -> Result<f64> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| err(&format!("{path}.{key}"), "expected a number")),
    }
}

fn parse_u32(obj: &Map<String, Value>, key: &str, default: u32, path: &str) -> Result<u32> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| err(&format!("{path}.{key}"), "expected a non-negative integer")),
    }
}

fn parse_node(value: &Value, path: &str) -> Result<MapSpec> {
    let obj = value.as_object().ok_or_else(|| err(path, "expected an object"))?;
    let kind = field(obj, "type", path)?
        .as_str()
        .ok_or_else(|| err(&format!("{path}.type"), "expected a string"))?;
    match kind {
        "mobius" => Ok(MapSpec::Mobius {
            alpha: parse_complex(field(obj, "alpha", path)?, &format!("{path}.alpha"))?,
            lambda: match obj.get("lambda") {
                Some(v) => parse_complex(v, &format!("{path}.lambda"))?,
                None => Complex64::new(1.0, 0.0),
            },
        }),
        "blaschke" => {
            let zeros_path = format!("{path}.zeros");
            let zeros = field(obj, "zeros", path)?
                .as_array()
                .ok_or_else(|| err(&zeros_path, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, z)| parse_complex(z, &format!("{zeros_path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(MapSpec::Blaschke {
                lambda: match obj.get("lambda") {
                    Some(v) => parse_complex(v, &format!("{path}.lambda"))?,
                    None => Complex64::new(1.0, 0.0),
                },
                zeros,
            })
        }
        "compose" => Ok(MapSpec::Compose {
            outer: Box::new(parse_node(field(obj, "outer", path)?, &format!("{path}.outer"))?),
            inner: Box::new(parse_node(field(obj, "inner", path)?, &format!("{path}.inner"))?),
        }),
        "gallery" => {
            let name = field(obj, "name", path)?
                .as_str()
                .ok_or_else(|| err(&format!("{path}.name"), "expected a string"))?;
            let ppath = format!("{path}.params");
            let empty = Map::new();
            let params = match obj.get("params") {
                None => &empty,
                Some(p) => p.as_object().ok_or_else(|| err(&ppath, "expected an object"))?,
            };
            let spec = match name {
                "half" => GallerySpec::Half,
                "scaled-exp" => GallerySpec::ScaledExp {
                    epsilon: parse_f64(params, "epsilon", gallery::DEFAULT_EPSILON, &ppath)?,
                    c: parse_f64(params, "c", gallery::DEFAULT_RATE, &ppath)?,
                },
                "slit-g" => GallerySpec::SlitG,
                "slit-power" => GallerySpec::SlitPower {
                    k: parse_u32(params, "k", 2, &ppath)?,
                },
                "atomic-inner" => GallerySpec::AtomicInner,
                "frostman" => GallerySpec::Frostman {
                    base: Box::new(parse_node(field(params, "base", &ppath)?, &format!("{ppath}.base"))?),
                    a: parse_complex(field(params, "a", &ppath)?, &format!("{ppath}.a"))?,
                },
                "escape" => GallerySpec::Escape {
                    n: parse_u32(params, "n", 2, &ppath)?,
                },
                other => {
                    return Err(err(
                        &format!("{path}.name"),
                        format!("unknown gallery name \"{other}\" (valid: {})", GALLERY_NAMES.join(", ")),
                    ))
                }
            };
            Ok(MapSpec::Gallery(spec))
        }
        other => Err(err(&format!("{path}.type"), format!("unknown type \"{other}\""))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_type_names_the_node() {
        let e = MapSpec::parse_str(
            r#"{"type":"compose","outer":{"type":"mobius","alpha":[0,0]},"inner":{"type":"bogus"}}"#,
        )
        .unwrap_err();
        match e {
            Error::SpecParse { path, .. } => assert_eq!(path, "$.inner.type"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_zero_names_the_index() {
        let e = MapSpec::parse_str(r#"{"type":"blaschke","lambda":[1,0],"zeros":[[0,0],[0.5]]}"#).unwrap_err();
        assert!(
            matches!(e, Error::SpecParse { ref path, .. } if path == "$.zeros[1]"),
            "{e:?}"
        );
    }

    #[test]
    fn canonical_gallery_json() {
        assert_eq!(
            MapSpec::Gallery(GallerySpec::Half).to_json().to_string(),
            r#"{"type":"gallery","name":"half"}"#
        );
        let se = MapSpec::Gallery(GallerySpec::ScaledExp {
            epsilon: 1e-10,
            c: 10.0,
        })
        .to_json();
        assert_eq!(se["params"]["epsilon"], json!(1e-10));
        assert_eq!(se["params"]["c"], json!(10.0));
    }

    #[test]
    fn json_round_trip() {
        let spec = MapSpec::Compose {
            outer: Box::new(MapSpec::Blaschke {
                lambda: Complex64::new(0.0, 1.0),
                zeros: vec![Complex64::new(0.1, 0.2)],
            }),
            inner: Box::new(MapSpec::Gallery(GallerySpec::Frostman {
                base: Box::new(MapSpec::Gallery(GallerySpec::AtomicInner)),
                a: Complex64::new(0.001, 0.0),
            })),
        };
        assert_eq!(MapSpec::from_json(&spec.to_json()).unwrap(), spec);
        assert!(spec.build().is_ok());
    }

    #[test]
    fn invalid_parameters_fail_at_build() {
        let spec = MapSpec::parse_str(r#"{"type":"mobius","alpha":[1.5,0],"lambda":[1,0]}"#).unwrap();
        assert!(matches!(spec.build(), Err(Error::InvalidArgument(_))));
    }
}
