//! Sequence-level operator models.

pub mod cesaro;
pub mod ideal;
pub mod limit;
pub mod order;
pub mod pietsch;
pub mod regvar;
pub mod sequence;
pub mod tensor;
pub mod weight;

pub use cesaro::cesaro;
pub use ideal::{ideal_membership, quasi_norm_estimate, Membership, MembershipReport};
pub use limit::{ComplexEstimate, LimitEstimate, Verdict};
pub use order::{eigen_to_singular, log_submajorize_check, order_eigenvalues, submajorize_check};
pub use pietsch::pietsch_operator;
pub use regvar::rv_index_estimate;
pub use sequence::{BoundedSequence, Envelope, Modulation, Profile, SequenceKind, SpectralSequence, TailModel};
pub use tensor::{tensor_sandwich_check, tensor_sequences, tensor_singular_values};
pub use weight::WeightFamily;
