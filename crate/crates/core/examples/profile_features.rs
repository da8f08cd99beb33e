// Account-metadata features (the F set) for one account.
//
//     cargo run --example profile_features

use botlex::dataset::Tweet;
use botlex::profile::{profile_features, ProfileMetadata, PROFILE_FEATURES};
use chrono::{TimeZone, Utc};

pub fn run_example() {
    let meta = ProfileMetadata {
        created_at: Utc.with_ymd_and_hms(2017, 3, 1, 0, 0, 0).unwrap(),
        followers_count: 1200,
        friends_count: 300,
        favourites_count: 4500,
        listed_count: 12,
        statuses_count: 9000,
    };
    let tweets = vec![
        Tweet {
            text: "new post https://t.co/x1".into(),
            likes: Some(4),
            retweets: Some(1),
            ..Default::default()
        },
        Tweet::new("@carol agreed!"),
        Tweet::new("RT @dave: worth a read https://t.co/y2"),
    ];
    let now = Utc.with_ymd_and_hms(2019, 3, 1, 0, 0, 0).unwrap();
    let f = profile_features(&meta, &tweets, now).unwrap();
    for (name, value) in PROFILE_FEATURES.iter().zip(f.values()) {
        println!("{name:<22}{value:.4}");
    }
    assert_eq!(f.age_days, 730.0);
    assert_eq!(f.followers_to_friends, 4.0);
    assert_eq!(f.user_replies, 1.0);
    assert_eq!(f.user_retweets, 1.0);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
