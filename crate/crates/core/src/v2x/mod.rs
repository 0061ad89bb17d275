//! V2X messaging: BSM codec and broadcast channel.

pub mod bsm;
pub mod channel;

pub use bsm::{
    decode_bsm, encode_bsm, heading_to_yaw, make_self_bsm, quantize_report, yaw_to_heading, Bsm, BsmError, BsmSource,
    KinematicReport, BSM_LEN, PROXY_ID_BASE,
};
pub use channel::{steps_per_period, Channel, ChannelConfig, ChannelError, ChannelStats, Delivery};
