pub mod eggbeater;
pub mod equivariant;
pub mod field;
pub mod floer;
pub mod freegroup;
pub mod par;
pub mod persistence;
pub mod sample;
