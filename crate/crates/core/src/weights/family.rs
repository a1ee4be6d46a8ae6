use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};

use super::conditions::{estimate_excess, Condition, ConstantEstimate, ProbeGrid};
use super::mollifier::{bump_mollifier, mollify, TensorRule};
use super::{FamilySpec, Profile, Weight, WeightFunction};

type MemberFn = Arc<dyn Fn(u32) -> Result<WeightFunction> + Send + Sync>;

#[derive(Clone)]
enum Generator {
    Radial {
        profile: Profile,
        base: f64,
    },
    Shifted {
        profile: Profile,
    },
    Mollified {
        parent: Arc<WeightFamily>,
        order: usize,
        stride: u32,
    },
    Custom(MemberFn),
}

/// Condition key, member index and probe grid bits.
type EstimateKey = (String, u32, [u64; 2]);

/// An indexed sequence `ν ↦ φ_ν` of weights on `ℝⁿ`, generated lazily.
///
/// Members and condition estimates are cached; concurrent requests for the
/// same key resolve to a single stored entry.
pub struct WeightFamily {
    name: String,
    dim: usize,
    generator: Generator,
    members: Mutex<BTreeMap<u32, Arc<WeightFunction>>>,
    estimates: Mutex<BTreeMap<EstimateKey, ConstantEstimate>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyInfo {
    pub name: String,
    pub dim: usize,
    pub cached_members: Vec<u32>,
    pub cached_estimates: usize,
}

impl WeightFamily {
    fn with_generator(name: String, dim: usize, generator: Generator) -> Self {
        WeightFamily {
            name,
            dim,
            generator,
            members: Mutex::new(BTreeMap::new()),
            estimates: Mutex::new(BTreeMap::new()),
        }
    }

    /// Family defined by an arbitrary member constructor.
    pub fn custom(
        name: impl Into<String>,
        dim: usize,
        member: impl Fn(u32) -> Result<WeightFunction> + Send + Sync + 'static,
    ) -> Self {
        Self::with_generator(name.into(), dim, Generator::Custom(Arc::new(member)))
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<Self> {
        make_radial_family(spec.parse_profile()?, spec.base, spec.dim)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FamilySpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn member(&self, nu: u32) -> Result<Arc<WeightFunction>> {
        if let Some(m) = self.members.lock().unwrap().get(&nu) {
            return Ok(m.clone());
        }
        let built = Arc::new(self.build(nu)?);
        if built.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "member {nu} of {} has dimension {}, expected {}",
                self.name,
                built.dim(),
                self.dim
            )));
        }
        Ok(self
            .members
            .lock()
            .unwrap()
            .entry(nu)
            .or_insert(built)
            .clone())
    }

    fn build(&self, nu: u32) -> Result<WeightFunction> {
        match &self.generator {
            Generator::Radial { profile, base } => {
                WeightFunction::radial(profile.clone(), base.powi(nu as i32), self.dim)
            }
            Generator::Shifted { profile } => {
                WeightFunction::shifted(profile.clone(), (self.dim as f64) * nu as f64, self.dim)
            }
            Generator::Mollified {
                parent,
                order,
                stride,
            } => {
                let kernel = bump_mollifier(self.dim)?;
                mollify(parent.member(stride * nu)?, &kernel, *order)
            }
            Generator::Custom(f) => f(nu),
        }
    }

    /// `{φ_{stride·m, 1}}`: the mollified members of every `stride`-th index.
    pub fn mollified(self: &Arc<Self>, order: usize, stride: u32) -> Result<WeightFamily> {
        if stride == 0 {
            return Err(Error::InvalidArgument("stride must be positive".into()));
        }
        TensorRule::new(&bump_mollifier(self.dim)?, order)?;
        let name = if stride == 1 {
            format!("{}*ω", self.name)
        } else {
            format!("({}*ω)[{stride}m]", self.name)
        };
        Ok(Self::with_generator(
            name,
            self.dim,
            Generator::Mollified {
                parent: self.clone(),
                order,
                stride,
            },
        ))
    }

    /// Grid estimate of the constant of `condition` between `φ_ν` and `φ_{ν+1}`.
    pub fn estimate(
        &self,
        condition: Condition,
        nu: u32,
        grid: &ProbeGrid,
    ) -> Result<ConstantEstimate> {
        let key = (
            condition.cache_key(),
            nu,
            [grid.radius.to_bits(), grid.nodes as u64],
        );
        if let Some(e) = self.estimates.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let lo = self.member(nu)?;
        let hi = self.member(nu + 1)?;
        let est = estimate_excess(condition, nu, self.dim, grid, |x| {
            condition.excess(lo.as_ref(), hi.as_ref(), x)
        });
        Ok(self
            .estimates
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(est)
            .clone())
    }

    pub fn info(&self) -> FamilyInfo {
        FamilyInfo {
            name: self.name.clone(),
            dim: self.dim,
            cached_members: self.members.lock().unwrap().keys().copied().collect(),
            cached_estimates: self.estimates.lock().unwrap().len(),
        }
    }
}

impl fmt::Debug for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFamily")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > crate::grid::MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

/// `φ_ν(x) = Ω(baseᵛ ‖x‖)`.
pub fn make_radial_family(profile: Profile, base: f64, dim: usize) -> Result<WeightFamily> {
    check_dim(dim)?;
    if !(base >= 2.0 && base.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "base must be at least 2, got {base}"
        )));
    }
    profile.check_monotone()?;
    let name = format!("{}({base}^ν‖x‖)", profile.name());
    Ok(WeightFamily::with_generator(
        name,
        dim,
        Generator::Radial { profile, base },
    ))
}

/// `φ_ν(x) = Ω(‖x‖₁ + nν)`: consecutive members are unit shifts of each
/// other, so the unit-shift constant vanishes.
pub fn make_shifted_family(profile: Profile, dim: usize) -> Result<WeightFamily> {
    check_dim(dim)?;
    profile.check_monotone()?;
    let name = format!("{}(‖x‖₁+nν)", profile.name());
    Ok(WeightFamily::with_generator(
        name,
        dim,
        Generator::Shifted { profile },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ProbeGrid {
        ProbeGrid {
            radius: 5.0,
            nodes: 51,
        }
    }

    #[test]
    fn radial_members() {
        let f = make_radial_family(Profile::Square, 2.0, 1).unwrap();
        assert_eq!(f.member(1).unwrap().eval(&[1.0]), 4.0);
        for x in [0.3, 1.0, -7.5] {
            let r = f.member(2).unwrap().eval(&[x]) / f.member(1).unwrap().eval(&[x]);
            assert!((r - 4.0).abs() < 1e-14);
        }
        assert!(Arc::ptr_eq(&f.member(3).unwrap(), &f.member(3).unwrap()));
    }

    #[test]
    fn rejects_small_base_and_bad_profile() {
        assert!(make_radial_family(Profile::Square, 1.5, 1).is_err());
        let bad = Profile::custom("sin", f64::sin);
        assert!(matches!(
            make_radial_family(bad, 2.0, 1),
            Err(Error::NonMonotoneProfile(_))
        ));
    }

    #[test]
    fn square_family_doubling_constant_vanishes() {
        let f = make_radial_family(Profile::Square, 2.0, 2).unwrap();
        let e = f.estimate(Condition::I3, 1, &small()).unwrap();
        assert_eq!(e.value, 0.0);
        let e = f.estimate(Condition::I4, 1, &small()).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.witness, vec![0.0, 0.0]);
        assert_eq!(f.info().cached_estimates, 2);
    }

    #[test]
    fn shifted_family_has_zero_unit_shift_constant() {
        let f = make_shifted_family(Profile::Square, 1).unwrap();
        let e = f.estimate(Condition::I2, 0, &small()).unwrap();
        assert!(e.value.abs() < 1e-8, "{}", e.value);
    }

    #[test]
    fn spec_json_round_trip() {
        let f =
            WeightFamily::from_json(r#"{"profile": "t^p", "p": 3, "base": 2, "dim": 2}"#).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f.member(0).unwrap().eval(&[0.0, 2.0]), 8.0);
        assert!(WeightFamily::from_json(r#"{"profile": "t^2", "bogus": 1}"#).is_err());
    }
}
