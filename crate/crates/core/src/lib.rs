//! Exact commutative algebra for m-primary ideals: polynomial arithmetic,
//! Gröbner bases, monomial ideals and their integral closures, Hilbert
//! coefficients of filtrations, reductions and Cohen–Macaulay certificates.

pub mod analysis;
pub mod error;
pub mod field;
pub mod filtration;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod lp;
pub mod monomial;
pub mod monomial_ideal;
pub mod newton;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod ring;

pub use analysis::{
    analyze_instance, coefficient_identities, itoh_inequalities, itoh_verdict, minimal_reduction, reduction_data, reduction_number,
    sample_superficial_element, sigma_sequence, valabrega_valla_certificate, AnalysisConfig, Classification, CmStatus,
    DepthReport, IdentityReport, InequalityReport, InstanceAnalysis, ItohVerdict, ReductionData, SuperficialElement,
};
pub use error::{AlgebraError, Error, Result};
pub use field::{Field, FieldKind, Fp, Rational};
pub use filtration::{
    filtration_term, ratliff_rush_closure, rr_deviation_sequence, Filtration, FiltrationConfig, FiltrationKind, Term,
};
pub use groebner::{buchberger_reduced_basis, GroebnerBasis, GroebnerConfig};
pub use hilbert::{h_vector, hilbert_coefficients, hilbert_data, hilbert_function_table, HilbertData, TableSize};
pub use ideal::{
    artinian_quotient_length, ideal_colon, ideal_combine, ideal_contains, ideal_intersection, ideal_membership,
    ideal_power, ideal_product, ideal_sum, ideals_equal, CombineOp, Ideal,
};
pub use monomial::{monomial_compare, ExponentVector, MonomialOrder, MAX_VARS};
pub use monomial_ideal::{minimalize, MonomialIdeal, StaircaseGrid};
pub use newton::{
    integral_closure, integral_closure_of_power, is_integrally_closed, normality_report, normalized_covolume, np_membership,
    NewtonPolyhedron,
    NormalityReport, NormalityVerdict,
};
pub use oracle::{run_oracle_suite, OracleConfig, OracleReport};
pub use parse::{parse_generators, parse_polynomial};
pub use poly::{monomial_string, Polynomial};
pub use ring::{Ring, RingDescriptor};

pub type QPolynomial = Polynomial<Rational>;
pub type FpPolynomial = Polynomial<Fp>;
pub type QIdeal = Ideal<Rational>;
pub type FpIdeal = Ideal<Fp>;
pub type QGroebnerBasis = GroebnerBasis<Rational>;
pub type FpGroebnerBasis = GroebnerBasis<Fp>;
