//! Cuspidal labels, Jordan blocks and Arthur parameters.

mod block;
mod json;
mod label;
mod lparam;
mod parameter;

pub use block::JordanBlock;
pub use json::{
    block_to_value, group_to_value, label_to_value, parameter_from_value, parameter_to_string, parameter_to_value,
    parse_group, parse_parameter,
};
pub use label::{
    abs, floor, fmt_rat, int, is_half_integer, is_odd, one, parse_rat, parse_signs, rat, sign_from_json,
    signs_to_string, zero, Cuspidal, Parity, QuadTag, Rational, Sign,
};
pub use lparam::{InfChar, LParameter};
pub use parameter::{AdmissibleOrder, ArthurParameter, Classification, Family, GoodParitySplit, GroupDescriptor};
