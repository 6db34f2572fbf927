//! Building blocks the indexes are assembled from: gap-encoded sorted lists,
//! range-maximum queries and an FM self-index.

mod bits;
pub mod fm;
pub mod gaplist;
mod intvec;
pub mod rmq;
pub mod sa;

pub use bits::RankBitVec;
pub use fm::{ApproxHit, SelfIndex};
pub use gaplist::GapList;
pub use intvec::IntVector;
pub use rmq::RangeMaxIndex;
