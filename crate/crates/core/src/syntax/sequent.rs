use std::fmt;

use super::config::Config;
use super::types::Type;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sequent {
    pub ante: Config,
    pub succ: Type,
}

impl Sequent {
    pub fn new(ante: Config, succ: Type) -> Sequent {
        Sequent { ante, succ }
    }

    /// Antecedent weight plus succedent weight.
    pub fn weight(&self) -> usize {
        self.ante.weight() + self.succ.weight()
    }

    pub fn validate(&self) -> Result<(), String> {
        self.succ.validate().map_err(|e| e.to_string())?;
        self.ante.validate()?;
        let (sa, ss) = (self.ante.sort(), self.succ.sort());
        if sa != ss {
            return Err(format!(
                "antecedent has sort {sa} but succedent {} has sort {ss}",
                self.succ
            ));
        }
        Ok(())
    }

    pub fn stripped(&self) -> Sequent {
        Sequent::new(self.ante.stripped(), self.succ.clone())
    }

    pub fn to_latex(&self) -> String {
        format!("{} \\Rightarrow {}", self.ante.to_latex(), self.succ.to_latex())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.ante, self.succ)
    }
}
