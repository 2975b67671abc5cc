//! HTTP-JSON session service behind `acectl serve`.

pub mod service;
