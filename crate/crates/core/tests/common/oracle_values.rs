//! Frozen reference values for data/geometry.json, produced by tests/oracle/fk_oracle.py.
#![allow(dead_code, clippy::excessive_precision)]

pub const SLIDER_AT_M0_8: f64 = 69.534723281748613863;
pub const DELTA_AT_M0_8: f64 = 198.46527671825138614;
pub const BASE_AT_M1_4: f64 = 280.69448720649718296;
pub const ALPHA_AT_M1_0: f64 = 1.4824067766198306226;
pub const X_LEFT_AT_M0_8: f64 = -54.879335758046082631;
pub const Y_TIP_AT_M0_8: f64 = 189.78002140562489254;
pub const Y_TIP_AT_M1_4: f64 = 186.91751446703564909;
pub const Y_TIP_AT_M1_9: f64 = 178.84891281186503393;
pub const APERTURE_OPEN: f64 = 109.75867151609216526;
pub const APERTURE_CLOSED: f64 = 65.494002187274995572;
pub const APERTURE_AT_M1_9: f64 = 12.492653789050251847;
pub const DX_LEFT_DTHETA_AT_M1_1: f64 = -36.874133567926216495;
pub const DY_TIP_DTHETA_AT_M1_1: f64 = 4.1141898615393891618;
pub const THETA_FOR_APERTURE_75: f64 = -1.3064861443536774831;
