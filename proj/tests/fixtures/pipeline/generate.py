"""Writes the synthetic water-crisis corpus used by the end-to-end tests.

500 tweets survive cleaning: 300 relevant ones drawn from three themes and 200
irrelevant ones. Ten exact duplicates and ten two-word tweets are added so
cleaning has work to do. Pakistan holds 69 tweets, one short of the group
threshold, while its region (Asia) clears it together with India.
"""
import json
import pathlib
import random

HERE = pathlib.Path(__file__).parent

THEMES = {
    "drought": ["rainfall", "reservoir", "crops", "farmers", "harvest", "wells", "heatwave", "livestock"],
    "contamination": ["lead", "pipes", "toxic", "bacteria", "unsafe", "boil", "sewage", "chemicals"],
    "shortage": ["tanker", "queue", "supply", "rationing", "taps", "mafia", "buckets", "hours"],
}
SHARED = ["water", "crisis", "city", "people", "families", "residents", "government", "help"]
OTHER = ["football", "match", "pizza", "beach", "concert", "movie", "weekend", "coffee", "birthday",
         "traffic", "music", "festival", "garden", "sunset", "holiday", "game", "album", "recipe"]
OTHER_WATER = ["sparkling", "bottle", "swimming", "waterpark", "aquarium", "rafting"]

LOCATIONS = {
    "USA": ["Florida, FL", "New York, USA", "Austin, Texas", "California"],
    "United Kingdom": ["London, UK", "Manchester", "Glasgow, Scotland"],
    "Pakistan": ["Karachi, Pakistan", "Lahore", "Islamabad"],
    "India": ["Mumbai, India", "Chennai", "Delhi"],
    None: ["Atlantis", "somewhere over the rainbow", "", None],
}
# (country, relevant, irrelevant)
PLAN = [("USA", 120, 60), ("United Kingdom", 75, 25), ("Pakistan", 45, 24), ("India", 20, 21), (None, 40, 70)]


def relevant_text(rng, theme):
    words = [theme] + rng.sample(THEMES[theme], 3) + rng.sample(SHARED, 2)
    rng.shuffle(words)
    return " ".join(words)


def irrelevant_text(rng):
    words = rng.sample(OTHER, 4) + ([rng.choice(OTHER_WATER)] if rng.random() < 0.5 else [])
    rng.shuffle(words)
    return " ".join(words)


def main():
    rng = random.Random(7)
    themes = list(THEMES)
    seen = set()
    tweets = []

    def add(text_fn, country, label):
        while True:
            text = text_fn()
            if text not in seen:
                break
        seen.add(text)
        tweet = {"id": f"t{len(tweets) + 1:04d}", "text": text, "label": label}
        location = rng.choice(LOCATIONS[country])
        if location is not None:
            tweet["location"] = location
        tweets.append(tweet)

    k = 0
    for country, relevant, irrelevant in PLAN:
        for _ in range(relevant):
            theme = themes[k % 3]
            k += 1
            add(lambda: relevant_text(rng, theme), country, "relevant")
        for _ in range(irrelevant):
            add(lambda: irrelevant_text(rng), country, "irrelevant")
    rng.shuffle(tweets)

    extras = []
    for i, src in enumerate(rng.sample(tweets, 10)):
        dup = dict(src)
        dup["id"] = f"d{i:04d}"
        dup["text"] = "  " + src["text"].upper() + " "
        extras.append(dup)
    for i in range(10):
        extras.append({"id": f"s{i:04d}", "text": f"water {OTHER[i]}", "label": "irrelevant", "location": "Lahore"})
    tweets.extend(extras)
    rng.shuffle(tweets)

    with open(HERE / "tweets.jsonl", "w") as f:
        for t in tweets:
            f.write(json.dumps(t) + "\n")


if __name__ == "__main__":
    main()
