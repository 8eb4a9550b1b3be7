//! Python bindings (placeholder while the core builds).
