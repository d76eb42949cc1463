mod assign;
mod embed;
mod oracle;
mod walk;

pub(crate) use assign::assign;
pub(crate) use embed::embed;
pub(crate) use oracle::oracle;
pub(crate) use walk::walk;
