use std::io::Write;

use switchcost::TaskMultiset;

use crate::algorithms::Assigner;
use crate::error::Result;
use crate::AssignArgs;

pub(crate) fn assign(args: &AssignArgs, seed: u64, out: &mut dyn Write) -> Result<u8> {
    let params = args.alg.params(seed)?;
    let tasks = TaskMultiset::parse(params.t, &args.multiset)?;
    if tasks.len() > params.w as usize {
        return Err(switchcost::Error::TooManyTasks {
            size: tasks.len(),
            workers: params.w,
        }
        .into());
    }
    let f = Assigner::build(&params)?;
    let r = f.as_fn().assign(&tasks)?;
    write!(out, "{}", r.assignment)?;
    writeln!(out, "fallback_used: {}", r.used_fallback())?;
    Ok(0)
}
