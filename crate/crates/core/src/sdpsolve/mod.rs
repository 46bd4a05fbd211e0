//! A small dense SDP layer: a barrier solver for the problem shapes used
//! here and exact checks of closed-form dual feasible points.

mod certs;
pub mod dense;
mod problem;
mod shapes;
mod solver;

pub use certs::{
    breuer_hall_diamond_cert, breuer_hall_eig_cert, check_diamond_certificate, check_eig_certificate,
    diamond_norm_ub, gen_choi_case, gen_choi_claim_attained, gen_choi_claimed_bound, gen_choi_xy,
    choi_diamond_cert, choi_eig_cert, gen_choi_diamond_cert, gen_choi_eig_cert, max_eig_ub, min_eig_lb_from_diamond,
    CertificateCheck, DualCertificate, GenChoiCase, CERT_PSD_TOL,
};
pub use problem::{AffineHermitian, HermVar, LinearConstraint, PsdBlock, SdpProblem};
pub use shapes::{
    diamond_bracket, diamond_problem, max_eig_bracket, max_eig_dual_problem, max_eig_primal_problem,
    min_witness_over_abs_ppt, min_witness_problem, min_witness_solution, Bracket, LmiMode,
};
pub use solver::{solve, SdpSolution, DEFAULT_GAP};
