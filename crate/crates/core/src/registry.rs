//! Interchangeable implementations of the same computation, selected by name.

use crate::characters::{toy_character, unit_map, CharacterMap};
use crate::coeff_series::Precision;
use crate::error::{Error, Result};
use crate::hopf::{antipode, antipode_geometric, antipode_recursive, AntipodeSide, HopfElement};
use crate::matrix_rep::{
    atkinson_factorize, beta_bch, beta_commutator, beta_conjugation, nonrecursive_minus,
    nonrecursive_plus_inverse, Matrix, SymPolyEntry, TriMatrix,
};

pub trait Named {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
}

/// A named family of characters.
pub trait CharacterSource: Named + Send + Sync {
    fn build(&self, prec: Precision) -> CharacterMap;
}

pub trait AntipodeMethod: Named + Send + Sync {
    fn apply(&self, x: &HopfElement) -> HopfElement;
}

/// Computes `β̂` from the counterterm matrix and the basis degrees.
pub trait BetaMethod: Named + Send + Sync {
    fn compute(&self, minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>>;
}

/// Produces `(φ̂₋, φ̂₊)` from `φ̂`.
pub trait MatrixBirkhoffMethod: Named + Send + Sync {
    fn factor(&self, phi_hat: &TriMatrix) -> Result<(TriMatrix, TriMatrix)>;
}

/// Ordered collection of trait objects looked up by name.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds an entry; a later entry with the same name replaces the earlier one.
    pub fn register(&mut self, entry: Box<T>) {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|b| b.as_ref())
    }
}

macro_rules! named {
    ($ty:ident, $name:literal, $desc:literal) => {
        pub struct $ty;
        impl Named for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn describe(&self) -> &'static str {
                $desc
            }
        }
    };
}

named!(
    ToyCharacter,
    "toy",
    "exp(-|t| z L) times B_w over all subtree sizes w"
);
named!(UnitCharacter, "unit", "the convolution unit e");

impl CharacterSource for ToyCharacter {
    fn build(&self, prec: Precision) -> CharacterMap {
        toy_character(prec)
    }
}

impl CharacterSource for UnitCharacter {
    fn build(&self, prec: Precision) -> CharacterMap {
        unit_map(prec)
    }
}

named!(
    MemoAntipode,
    "memo",
    "tree recursion memoized, extended multiplicatively"
);
named!(LeftAntipode, "left", "S(x) = -x - sum S(x') x''");
named!(RightAntipode, "right", "S(x) = -x - sum x' S(x'')");
named!(GeometricAntipode, "geometric", "sum of (e - Id)^{*n}");

impl AntipodeMethod for MemoAntipode {
    fn apply(&self, x: &HopfElement) -> HopfElement {
        antipode(x)
    }
}

impl AntipodeMethod for LeftAntipode {
    fn apply(&self, x: &HopfElement) -> HopfElement {
        antipode_recursive(x, AntipodeSide::Left)
    }
}

impl AntipodeMethod for RightAntipode {
    fn apply(&self, x: &HopfElement) -> HopfElement {
        antipode_recursive(x, AntipodeSide::Right)
    }
}

impl AntipodeMethod for GeometricAntipode {
    fn apply(&self, x: &HopfElement) -> HopfElement {
        antipode_geometric(x)
    }
}

named!(
    ConjugationBeta,
    "conjugation",
    "phi_- (z Z0) phi_-^-1 - z Z0"
);
named!(CommutatorBeta, "commutator", "[Res phi_-, Z0]");
named!(BchBeta, "bch", "z sum ad[log phi_-]^n (Z0) / n!");

impl BetaMethod for ConjugationBeta {
    fn compute(&self, minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>> {
        beta_conjugation(minus, degrees)
    }
}

impl BetaMethod for CommutatorBeta {
    fn compute(&self, minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>> {
        beta_commutator(minus, degrees)
    }
}

impl BetaMethod for BchBeta {
    fn compute(&self, minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>> {
        beta_bch(minus, degrees)
    }
}

named!(
    AtkinsonBirkhoff,
    "atkinson",
    "X = 1 - R(X a), Y = 1 - R~(a Y), solved entry by entry"
);
named!(
    ChainBirkhoff,
    "nonrecursive",
    "closed-form sums over index chains"
);

impl MatrixBirkhoffMethod for AtkinsonBirkhoff {
    fn factor(&self, phi_hat: &TriMatrix) -> Result<(TriMatrix, TriMatrix)> {
        let f = atkinson_factorize(phi_hat)?;
        Ok((f.minus, f.plus))
    }
}

impl MatrixBirkhoffMethod for ChainBirkhoff {
    fn factor(&self, phi_hat: &TriMatrix) -> Result<(TriMatrix, TriMatrix)> {
        let minus = nonrecursive_minus(phi_hat)?;
        let plus = nonrecursive_plus_inverse(phi_hat)?.inverse_unipotent()?;
        Ok((minus, plus))
    }
}

/// Every registry, filled with the built-in entries.
pub struct Strategies {
    pub characters: Registry<dyn CharacterSource>,
    pub antipodes: Registry<dyn AntipodeMethod>,
    pub betas: Registry<dyn BetaMethod>,
    pub matrix_birkhoff: Registry<dyn MatrixBirkhoffMethod>,
}

impl Default for Strategies {
    fn default() -> Self {
        let mut characters: Registry<dyn CharacterSource> = Registry::new("character");
        characters.register(Box::new(ToyCharacter));
        characters.register(Box::new(UnitCharacter));

        let mut antipodes: Registry<dyn AntipodeMethod> = Registry::new("antipode method");
        antipodes.register(Box::new(MemoAntipode));
        antipodes.register(Box::new(LeftAntipode));
        antipodes.register(Box::new(RightAntipode));
        antipodes.register(Box::new(GeometricAntipode));

        let mut betas: Registry<dyn BetaMethod> = Registry::new("beta method");
        betas.register(Box::new(ConjugationBeta));
        betas.register(Box::new(CommutatorBeta));
        betas.register(Box::new(BchBeta));

        let mut matrix_birkhoff: Registry<dyn MatrixBirkhoffMethod> =
            Registry::new("matrix Birkhoff method");
        matrix_birkhoff.register(Box::new(AtkinsonBirkhoff));
        matrix_birkhoff.register(Box::new(ChainBirkhoff));

        Strategies {
            characters,
            antipodes,
            betas,
            matrix_birkhoff,
        }
    }
}
