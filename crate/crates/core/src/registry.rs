//! Name-keyed factories for interchangeable strategies.

use crate::error::{Error, Result};

pub type Factory<T, A> = fn(&A) -> Result<Box<T>>;

/// Strategies of one family (`kind`), created by name at runtime.
pub struct Registry<T: ?Sized, A: ?Sized> {
    kind: &'static str,
    factories: Vec<(&'static str, Factory<T, A>)>,
}

impl<T: ?Sized, A: ?Sized> Registry<T, A> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, factories: Vec::new() }
    }

    /// Registers `factory` under `name`, replacing any earlier entry.
    pub fn register(&mut self, name: &'static str, factory: Factory<T, A>) -> &mut Self {
        self.factories.retain(|(n, _)| *n != name);
        self.factories.push((name, factory));
        self
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.iter().map(|(n, _)| *n).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.iter().any(|(n, _)| *n == name)
    }

    pub fn create(&self, name: &str, args: &A) -> Result<Box<T>> {
        let (_, factory) = self
            .factories
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().join(", "),
            })?;
        factory(args)
    }
}
