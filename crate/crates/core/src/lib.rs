pub mod exact;
pub mod rootsys;
pub mod titsdiagram;
pub mod treefold;
