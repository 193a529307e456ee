use super::EquivariantError;
use crate::field::{Extended, Field, Matrix, Rational};
use crate::persistence::FinitePersistenceModule;

/// Persistence module with a `Z_p`-action: one automorphism per constancy
/// region, commuting with the structure maps, with `A^p = id`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZpPersistenceModule<F: Field> {
    base: FinitePersistenceModule<F>,
    action: Vec<Matrix<F>>,
    p: u32,
    degree: Option<i64>,
}

impl<F: Field> ZpPersistenceModule<F> {
    pub fn new(
        base: FinitePersistenceModule<F>,
        action: Vec<Matrix<F>>,
        p: u32,
        degree: Option<i64>,
    ) -> Result<Self, EquivariantError> {
        crate::field::check_prime(p)?;
        if action.len() != base.dims().len() {
            return Err(EquivariantError::Invalid(format!(
                "expected {} action matrices, got {}",
                base.dims().len(),
                action.len()
            )));
        }
        let unit = base.unit().clone();
        for (i, a) in action.iter().enumerate() {
            let d = base.dims()[i];
            if a.rows() != d || a.cols() != d {
                return Err(EquivariantError::Invalid(format!(
                    "action on region {i} must be {d}x{d}"
                )));
            }
            if a.pow(p as u64)? != Matrix::identity(d, &unit) {
                return Err(EquivariantError::NotOrderP { region: i, p });
            }
        }
        check_commutes(&base, &action)?;
        Ok(Self {
            base,
            action,
            p,
            degree,
        })
    }

    pub fn base(&self) -> &FinitePersistenceModule<F> {
        &self.base
    }

    pub fn action(&self) -> &[Matrix<F>] {
        &self.action
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> Option<i64> {
        self.degree
    }

    pub fn with_degree(mut self, degree: Option<i64>) -> Self {
        self.degree = degree;
        self
    }

    pub fn unit(&self) -> &F {
        self.base.unit()
    }

    /// Same module over a refined spectrum.
    fn refine(&self, spectrum: &[Rational]) -> Self {
        let base = self.base.refine(spectrum);
        let action = (0..=spectrum.len())
            .map(|k| {
                let orig = if k == 0 {
                    0
                } else {
                    self.base.spectrum().partition_point(|s| s <= &spectrum[k - 1])
                };
                self.action[orig].clone()
            })
            .collect();
        Self {
            base,
            action,
            p: self.p,
            degree: self.degree,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, EquivariantError> {
        if self.p != other.p {
            return Err(EquivariantError::Invalid("direct sum of different p".into()));
        }
        let mut spectrum: Vec<Rational> = self
            .base
            .spectrum()
            .iter()
            .chain(other.base.spectrum())
            .cloned()
            .collect();
        spectrum.sort();
        spectrum.dedup();
        let (a, b) = (self.refine(&spectrum), other.refine(&spectrum));
        Ok(Self {
            base: a.base.direct_sum(&b.base),
            action: a
                .action
                .iter()
                .zip(&b.action)
                .map(|(x, y)| x.direct_sum(y))
                .collect(),
            p: self.p,
            degree: self.degree,
        })
    }

    /// Conjugates by a basis change `P_i` on every region: `A'_i = P_i^{-1} A_i P_i`.
    pub fn change_basis(&self, p: &[Matrix<F>]) -> Result<Self, EquivariantError> {
        let base = self.base.change_basis(p)?;
        let action = self
            .action
            .iter()
            .zip(p)
            .map(|(a, m)| {
                let inv = m.inverse()?.expect("checked invertible by base change");
                inv.mul(&a.mul(m)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { base, action, ..self.clone() })
    }

    /// Same algebra, spectrum replaced (must stay strictly increasing).
    pub fn with_spectrum(&self, spectrum: Vec<Rational>) -> Result<Self, EquivariantError> {
        let base = FinitePersistenceModule::new(
            spectrum,
            self.base.dims().to_vec(),
            self.base.transitions().to_vec(),
            self.unit(),
        )?;
        Ok(Self { base, ..self.clone() })
    }
}

fn check_commutes<F: Field>(
    base: &FinitePersistenceModule<F>,
    action: &[Matrix<F>],
) -> Result<(), EquivariantError> {
    for (i, t) in base.transitions().iter().enumerate() {
        if t.mul(&action[i])? != action[i + 1].mul(t)? {
            return Err(EquivariantError::NotEquivariant { region: i });
        }
    }
    Ok(())
}

fn check_root<F: Field>(zeta: &F, p: u32) -> Result<(), EquivariantError> {
    if zeta.pow(p as u64).is_one() {
        Ok(())
    } else {
        Err(EquivariantError::NotRootOfUnity(p))
    }
}

pub(crate) fn check_primitive<F: Field>(zeta: &F, p: u32) -> Result<(), EquivariantError> {
    check_root(zeta, p)?;
    if zeta.is_one() {
        return Err(EquivariantError::NotPrimitive(p));
    }
    Ok(())
}

/// `(L_ζ)_t = ker(A_t − ζ)` with the induced structure maps.
pub fn eigenspace_module<F: Field>(
    v: &ZpPersistenceModule<F>,
    zeta: &F,
) -> Result<FinitePersistenceModule<F>, EquivariantError> {
    check_root(zeta, v.p)?;
    let subs = kernels(v, zeta)?;
    Ok(v.base.submodule(&subs)?)
}

fn kernels<F: Field>(v: &ZpPersistenceModule<F>, zeta: &F) -> Result<Vec<Matrix<F>>, EquivariantError> {
    v.action
        .iter()
        .map(|a| {
            let k = a.sub_scalar_identity(zeta)?.kernel_basis();
            Ok(Matrix::from_columns(a.rows(), &k, v.unit())?)
        })
        .collect()
}

/// `L_t = V_t / Fix(A_t)` with the induced structure maps.
pub fn quotient_fix_module<F: Field>(
    v: &ZpPersistenceModule<F>,
) -> Result<FinitePersistenceModule<F>, EquivariantError> {
    let one = v.unit().clone();
    let subs = kernels(v, &one)?;
    Ok(v.base.quotient(&subs)?)
}

/// Module with action `A = B^p`, where `B` commutes with the structure maps
/// and `B^{p²} = id`.
pub fn construct_full_power<F: Field>(
    seed: &FinitePersistenceModule<F>,
    b: &[Matrix<F>],
    p: u32,
    degree: Option<i64>,
) -> Result<ZpPersistenceModule<F>, EquivariantError> {
    if b.len() != seed.dims().len() {
        return Err(EquivariantError::Invalid("one B per region".into()));
    }
    check_commutes(seed, b)?;
    let action = b
        .iter()
        .map(|m| m.pow(p as u64))
        .collect::<Result<Vec<_>, _>>()?;
    ZpPersistenceModule::new(seed.clone(), action, p, degree)
}

/// `p × p` cyclic permutation `e_j ↦ e_{j+1 mod p}`.
pub fn cyclic_permutation<F: Field>(n: usize, unit: &F) -> Matrix<F> {
    Matrix::from_fn(n, n, unit, |i, j| {
        if i == (j + 1) % n {
            unit.one_like()
        } else {
            unit.zero_like()
        }
    })
}

/// `p` generators born together at `action`, permuted cyclically, all dying
/// at `death` (or never). Every `L_ζ` is the single bar `(action, death]`.
pub fn cyclic_tuple_module<F: Field>(
    action: &Rational,
    p: u32,
    degree: Option<i64>,
    death: &Extended,
    unit: &F,
) -> Result<ZpPersistenceModule<F>, EquivariantError> {
    let n = p as usize;
    let perm = cyclic_permutation(n, unit);
    let (spectrum, dims, transitions, act) = match death {
        Extended::Infinity => (
            vec![action.clone()],
            vec![0, n],
            vec![Matrix::zeros(n, 0, unit)],
            vec![Matrix::zeros(0, 0, unit), perm],
        ),
        Extended::Finite(d) => {
            if d <= action {
                return Err(EquivariantError::Invalid(format!(
                    "death {d} must follow birth {action}"
                )));
            }
            (
                vec![action.clone(), d.clone()],
                vec![0, n, 0],
                vec![Matrix::zeros(n, 0, unit), Matrix::zeros(0, n, unit)],
                vec![Matrix::zeros(0, 0, unit), perm, Matrix::zeros(0, 0, unit)],
            )
        }
    };
    let base = FinitePersistenceModule::new(spectrum, dims, transitions, unit)?;
    ZpPersistenceModule::new(base, act, p, degree)
}
