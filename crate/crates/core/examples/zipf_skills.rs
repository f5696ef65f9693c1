//! Synthetic skills with Zipf-distributed frequencies.

use signed_teams::harness::{generate_zipf_skills, PerUserSkills};
use signed_teams::SkillId;

fn main() {
    let (users, universe) = (7066, 500);
    for exponent in [0.5, 1.0, 1.5] {
        let skills = generate_zipf_skills(users, universe, exponent, PerUserSkills::default(), 42).unwrap();
        let freq = |r: u32| skills.users_with(SkillId(r)).len();
        let total: usize = (0..universe as u32).map(freq).sum();
        let unused = (0..universe as u32).filter(|&r| freq(r) == 0).count();
        println!(
            "s={exponent}: {:.2} skills/user, rank 1/2/10/100 held by {}/{}/{}/{}, {unused} skills unused",
            total as f64 / users as f64,
            freq(0),
            freq(1),
            freq(9),
            freq(99)
        );
    }
    let fixed = generate_zipf_skills(10, 500, 1.0, PerUserSkills::Fixed(2), 1).unwrap();
    for u in 0..3 {
        let held: Vec<&str> = fixed.skills_of(signed_teams::NodeId(u)).iter().map(|&s| fixed.skill_label(s)).collect();
        println!("user {u}: {}", held.join(" "));
    }
}
