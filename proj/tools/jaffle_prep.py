#!/usr/bin/env python3
"""Derive the calculated jaffle-shop attributes from jafgen CSV output.

Reads <prefix>_customers.csv, _orders.csv, _items.csv, _products.csv,
_supplies.csv, _stores.csv and _tweets.csv and writes the source files
expected by configs/jaffle_shop_mapping.json into the output directory.
"""

import argparse
import csv
from collections import Counter, defaultdict
from pathlib import Path


def read(src: Path, prefix: str, entity: str) -> list[dict]:
    with open(src / f"{prefix}_{entity}.csv", newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def write(out: Path, name: str, header: list[str], rows) -> None:
    with open(out / name, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def money(text: str) -> float:
    return float(text) if text else 0.0


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("source", type=Path, help="directory with the jafgen CSV files")
    parser.add_argument("out", type=Path, help="directory for the prepared CSV files")
    parser.add_argument("--prefix", default="raw", help="jafgen file prefix (default: raw)")
    args = parser.parse_args()
    src, out, prefix = args.source, args.out, args.prefix
    out.mkdir(parents=True, exist_ok=True)

    customers = read(src, prefix, "customers")
    orders = read(src, prefix, "orders")
    items = read(src, prefix, "items")
    products = read(src, prefix, "products")
    supplies = read(src, prefix, "supplies")
    stores = read(src, prefix, "stores")
    tweets = read(src, prefix, "tweets")

    write(out, "customers.csv", ["id", "name"], ((c["id"], c["name"]) for c in customers))
    write(out, "stores.csv", ["id", "name", "opened_at", "tax_rate"],
          ((s["id"], s["name"], s["opened_at"], s["tax_rate"]) for s in stores))
    write(out, "tweets.csv", ["id", "user_id", "tweeted_at", "content"],
          ((t["id"], t["user_id"], t["tweeted_at"], t["content"]) for t in tweets))

    ingredients = {}
    cost_of = defaultdict(float)
    for s in supplies:
        ingredients.setdefault(s["id"], (s["id"], s["name"], s["cost"], s["perishable"]))
        cost_of[s["sku"]] += money(s["cost"])
    write(out, "ingredients.csv", ["id", "name", "cost", "perishable"], ingredients.values())
    write(out, "ingredient_product.csv", ["supply_id", "sku"], sorted({(s["id"], s["sku"]) for s in supplies}))

    rows = []
    for p in products:
        price, cost = money(p["price"]), cost_of[p["sku"]]
        margin = round(100 * (price - cost) / price, 2) if price else ""
        rows.append((p["sku"], p["name"], p["type"], p["price"], p["description"], round(cost, 2), margin))
    write(out, "products.csv", ["sku", "name", "type", "price", "description", "cost", "margin_perc"], rows)

    order_by_id = {o["id"]: o for o in orders}
    item_count = Counter(i["order_id"] for i in items)
    rows = []
    for o in orders:
        correct = abs(money(o["subtotal"]) + money(o["tax_paid"]) - money(o["order_total"])) < 1e-6
        rows.append((o["id"], o["customer"], o["ordered_at"], o["store_id"], o["subtotal"], o["tax_paid"],
                     o["order_total"], item_count[o["id"]], str(correct).lower()))
    write(out, "orders.csv", ["id", "customer", "ordered_at", "store_id", "subtotal", "tax_paid", "order_total",
                              "item_count", "total_is_correct"], rows)
    write(out, "order_items.csv", ["order_id", "sku", "ordered_at"],
          sorted({(i["order_id"], i["sku"], order_by_id[i["order_id"]]["ordered_at"])
                  for i in items if i["order_id"] in order_by_id}))

    # Per-store customer counts and customer-store links, on each first visit.
    seen_at_store = defaultdict(set)
    visits, links = [], []
    for o in sorted(orders, key=lambda o: (o["ordered_at"], o["id"])):
        store, customer = o["store_id"], o["customer"]
        if customer in seen_at_store[store]:
            continue
        seen_at_store[store].add(customer)
        visits.append((store, o["id"], o["ordered_at"], len(seen_at_store[store])))
        links.append((customer, store, o["ordered_at"]))
    write(out, "store_customer_count.csv", ["store_id", "order_id", "at", "customer_count"], visits)
    write(out, "customer_store.csv", ["customer_id", "store_id", "at"], links)

    # Tweet counts per customer, one update per tweet.
    counts = Counter()
    rows = []
    for t in sorted(tweets, key=lambda t: (t["tweeted_at"], t["id"])):
        counts[t["user_id"]] += 1
        rows.append((t["user_id"], t["id"], t["tweeted_at"], counts[t["user_id"]]))
    write(out, "customer_tweet_count.csv", ["customer_id", "tweet_id", "at", "tweet_count"], rows)

    # Favorite product: most ordered so far; changes only when overtaken.
    skus_of = defaultdict(list)
    for i in items:
        skus_of[i["order_id"]].append(i["sku"])
    tally = defaultdict(Counter)
    favorite = {}
    rows = []
    for o in sorted(orders, key=lambda o: (o["ordered_at"], o["id"])):
        c = o["customer"]
        tally[c].update(skus_of[o["id"]])
        if not tally[c]:
            continue
        best = favorite.get(c)
        top, n = max(tally[c].items(), key=lambda kv: (kv[1], kv[0]))
        if best is None or n > tally[c][best]:
            favorite[c] = top
            rows.append((c, top, o["ordered_at"]))
    write(out, "customer_favorite.csv", ["customer_id", "sku", "at"], rows)


if __name__ == "__main__":
    main()
