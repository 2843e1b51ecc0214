#!/usr/bin/env python3
# Copyright 2026 The stanceshift Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled 500-pair fixture under data/fixture.

The output is committed; rerunning with the same seed rewrites identical
files. Reply stance follows a step function: positive replies become far
more common from 2022-02-24 onwards.
"""

import argparse
import datetime as dt
import json
import pathlib
import random

SEED = 20220224
SHIFT = dt.datetime(2022, 2, 24, tzinfo=dt.timezone.utc)
START = dt.datetime(2021, 9, 1, tzinfo=dt.timezone.utc)
WEEKS = 52
TOPIC_NEWS = 250
REPLIES_PER_NEWS = 2
OFF_TOPIC_NEWS = 40
DOUBLE_ANNOTATED = 100
SECOND_ANNOTATOR_AGREEMENT = 0.85

OUTLETS = [
    ("tvp_info", "PL", "TVP Info", "pl"),
    ("rzeczpospolita", "PL", "Rzeczpospolita", "pl"),
    ("lemonde", "FR", "Le Monde", "fr"),
    ("tagesschau", "DE", "tagesschau", "de"),
    ("repubblica", "IT", "la Repubblica", "it"),
    ("elpais", "ES", "EL PAÍS", "es"),
]
COUNTRIES = ["PL", "FR", "DE", "IT", "ES"]

NEWS_BEFORE = [
    "Border crisis deepens as migrants wait in freezing camps",
    "Illegal migrants stopped again at the border crossing",
    "Officials warn of a migration threat on the eastern border",
    "Migrants stuck at the border as the crisis turns violent",
    "Government says the migration crisis is a danger to security",
    "Minister blames smugglers for the border crisis and illegal migrant crossings",
]
NEWS_NOVEMBER = [
    "Belarus border crisis: migrants pushed back into the forest",
    "Illegal migrant crossings rise at the Belarus border, police say",
]
NEWS_AFTER = [
    "War refugees welcomed by volunteers at the main station",
    "War refugees find safe homes with local families",
    "Refugees fleeing the war receive support and free transport",
    "Solidarity with refugees: city opens shelters for families",
    "Volunteers help refugee children start school",
    "Refugee families thank volunteers for their kindness",
]
NEWS_MARCH = [
    "Ukrainian refugees arrive as war refugees fill reception centres",
    "Ukrainian refugees welcomed across the country",
]
NEWS_NEUTRAL = [
    "Ministry publishes monthly migration statistics",
    "Parliament debates the asylum law for immigrants",
]
OFF_TOPIC = [
    "Local football club wins the derby after extra time",
    "Train timetable changes announced for the weekend",
    "Museum opens a new exhibition of modern art",
    "Heavy rain expected across the north on Friday",
]

REPLIES = {
    "POS": [
        "We must help them, welcome everyone!",
        "So proud of the volunteers, thank you",
        "Great to see such kindness and solidarity",
        "They deserve a safe home and our support",
        "Refugees are welcome here",
    ],
    "NEG": [
        "Close the border now, this is a disaster",
        "Illegal migrants are a threat to our safety",
        "Stop this invasion, enough is enough",
        "Another failure of the government, shame",
        "We cannot afford this burden",
    ],
    "NEU": [
        "How many people crossed last month?",
        "Where can I find the official figures",
        "Is this the same report as yesterday",
        "Which office handles the applications",
        "Source please",
    ],
}
STANCE_PROBS_BEFORE = [("POS", 0.2), ("NEG", 0.5), ("NEU", 0.3)]
STANCE_PROBS_AFTER = [("POS", 0.6), ("NEG", 0.15), ("NEU", 0.25)]


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def draw(rng, probs):
    u = rng.random()
    acc = 0.0
    for label, p in probs:
        acc += p
        if u < acc:
            return label
    return probs[-1][0]


def news_text(rng, when):
    if rng.random() < 0.15:
        return rng.choice(NEWS_NEUTRAL)
    if when < SHIFT:
        pool = NEWS_BEFORE + (NEWS_NOVEMBER * 2 if when.month == 11 else [])
    else:
        pool = NEWS_AFTER + (NEWS_MARCH * 2 if when.month == 3 and when.year == 2022 else [])
    return rng.choice(pool)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent /
                                             "data" / "fixture"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    next_id = [1450000000000000000]

    def new_id():
        next_id[0] += 1
        return str(next_id[0])

    tweets = []
    labels = []
    lang_of = {o[0]: o[3] for o in OUTLETS}

    def outlet_for(country):
        return rng.choice([o[0] for o in OUTLETS if o[1] == country])

    for i in range(TOPIC_NEWS):
        country = COUNTRIES[i % len(COUNTRIES)]
        week = i * WEEKS // TOPIC_NEWS
        when = START + dt.timedelta(weeks=week, days=rng.randrange(7),
                                    hours=rng.randrange(6, 20), minutes=rng.randrange(60))
        author = outlet_for(country)
        lang = lang_of[author]
        english = news_text(rng, when)
        nid = new_id()
        tweets.append({
            "id": nid, "author": author, "created_at": iso(when), "lang": lang,
            "text": f"[{lang}] {english}", "translated_text": english,
            "reply_count": REPLIES_PER_NEWS,
        })
        probs = STANCE_PROBS_BEFORE if when < SHIFT else STANCE_PROBS_AFTER
        for _ in range(REPLIES_PER_NEWS):
            stance = draw(rng, probs)
            reply_english = rng.choice(REPLIES[stance])
            rid = new_id()
            rwhen = when + dt.timedelta(minutes=rng.randrange(5, 300))
            tweets.append({
                "id": rid, "author": f"user{rng.randrange(100000)}", "created_at": iso(rwhen),
                "lang": lang, "text": f"[{lang}] {reply_english}",
                "translated_text": reply_english, "reply_to_id": nid,
            })
            labels.append((f"{nid}:{rid}", "a1", stance))

    for i in range(OFF_TOPIC_NEWS):
        country = COUNTRIES[i % len(COUNTRIES)]
        when = START + dt.timedelta(days=rng.randrange(360), hours=rng.randrange(24))
        author = outlet_for(country)
        nid = new_id()
        english = rng.choice(OFF_TOPIC)
        tweets.append({
            "id": nid, "author": author, "created_at": iso(when), "lang": lang_of[author],
            "text": f"[{lang_of[author]}] {english}", "translated_text": english,
            "reply_count": 1,
        })
        tweets.append({
            "id": new_id(), "author": "user1", "created_at": iso(when + dt.timedelta(hours=1)),
            "lang": lang_of[author], "text": "Nice", "translated_text": "Nice",
            "reply_to_id": nid,
        })

    # Records the loader must quarantine.
    tweets.append({"id": new_id(), "author": "lemonde", "created_at": "2021-08-15T10:00:00Z",
                   "lang": "fr", "text": "[fr] Migrants rescued at sea",
                   "translated_text": "Migrants rescued at sea", "reply_count": 0})
    tweets.append({"id": new_id(), "author": "unknown_outlet",
                   "created_at": "2022-01-10T10:00:00Z", "lang": "en",
                   "text": "Refugees arrive", "reply_count": 0})
    tweets.append(dict(tweets[0]))
    tweets.append({"id": new_id(), "author": "tagesschau", "created_at": "2022-04-01T09:00:00Z",
                   "lang": "de", "text": "   ", "reply_count": 0})

    # Second annotator on the first pairs, mostly agreeing.
    second = []
    for pair_id, _, stance in labels[:DOUBLE_ANNOTATED]:
        if rng.random() < SECOND_ANNOTATOR_AGREEMENT:
            second.append((pair_id, "a2", stance))
        else:
            second.append((pair_id, "a2", rng.choice([s for s in REPLIES if s != stance])))

    with open(out / "outlets.csv", "w", encoding="utf-8", newline="\n") as f:
        f.write("username,country,display_name,external_id\n")
        for username, country, name, _ in OUTLETS:
            f.write(f"{username},{country},{name},\n")
    with open(out / "tweets.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for t in tweets:
            f.write(json.dumps(t, ensure_ascii=False, sort_keys=True) + "\n")
    with open(out / "labels.csv", "w", encoding="utf-8", newline="\n") as f:
        f.write("pair_id,annotator_id,label\n")
        for row in labels + second:
            f.write(",".join(row) + "\n")

    config = {
        "name": "fixture",
        "paths": {
            "tweets": "tweets.jsonl",
            "outlets": "outlets.csv",
            "labels": "labels.csv",
            "lexicon": "../lexicon/sentiment_lexicon.tsv",
            "stopwords": "../termshift/stopwords.txt",
            "entities": "../termshift/entities.txt",
            "lemmas": "../termshift/lemmas.tsv",
        },
        "window": {"start": "2021-09-01T00:00:00Z", "end": "2022-09-01T00:00:00Z"},
        "countries": COUNTRIES,
        "bucketing": "week",
        "seed": 42,
        "filter": {"min_replies": 1},
        "sentiment": {"exclude_zero": True},
        "stance": {"scalar": "signed_mean", "label_merge": "keep_first"},
        "termshift": {"foreground": "2022-03", "background": "2021-11", "k": 10},
        "granger": {"max_lag": 4},
        "eval": {"folds": 5, "bow": True},
        "adapter": {
            "base_model": "cardiffnlp/twitter-xlm-roberta-base",
            "batch_size": 16,
            "max_sequence_length": 128,
            "epochs": [2, 3, 4, 5],
            "encoder_lr": [2e-5, 3e-5, 4e-5, 5e-5],
            "head_lr": [1e-3, 2e-3, 3e-3, 4e-3, 5e-3],
            "warmup_proportion": 0.1,
            "weight_decay": 0.01,
            "search_trials": 10,
            "seed": 42,
        },
    }
    with open(out / "config.json", "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
