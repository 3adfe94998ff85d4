"""Missing numbers of small bipartite UPBs, row ``m`` by column ``n`` (n <= m)."""

TABLE1_TEXT = {
    3: ["4"],
    4: ["4-6", "4-8"],
    5: ["4-6, 8", "4-8, 12", "4-9, 12, 16"],
    6: ["4-6, 8, 10", "4-12, 14", "4-14, 16, 20", "4-16, 18, 20, 24"],
    7: ["4-6, 8-10, 12", "4-14, 18", "4-18, 20, 24", "4-22, 24, 30", "4-28, 30, 36"],
    8: ["4-6, 8-12, 14", "4-18, 20", "4-22, 24, 28", "4-26, 28, 30, 34",
        "4-34, 36, 42", "4-40, 42, 48"],
    9: ["4-6, 8-14, 16", "4-20, 24", "4-26, 28, 32", "4-32, 34, 40", "4-40, 42, 48",
        "4-46, 48, 56", "4-54, 56, 64"],
    10: ["4-6, 8-16, 18", "4-24, 26", "4-30, 32, 36", "4-36, 38, 40, 44", "4-46, 48, 54",
         "4-54, 56, 62", "4-62, 64, 72", "4-70, 72, 80"],
    11: ["4-6, 8-18, 20", "4-26, 30", "4-34, 36, 40", "4-42, 44, 50", "4-52, 54, 60",
         "4-60, 62, 70", "4-70, 72, 80", "4-78, 80, 90", "4-88, 90, 100"],
    12: ["4-6, 8-20, 22", "4-30, 32", "4-38, 40, 44", "4-46, 48, 50, 54", "4-58, 60, 66",
         "4-68, 70, 76", "4-78, 80, 88", "4-88, 90, 98", "4-98, 100, 110",
         "4-108, 110, 120"],
    13: ["4-6, 8-22, 24", "4-32, 36", "4-42, 44, 48", "4-52, 54, 60", "4-64, 66, 72",
         "4-74, 76, 84", "4-86, 88, 96", "4-96, 98, 108", "4-108, 110, 120",
         "4-118, 120, 132", "4-130, 132, 144"],
    14: ["4-6, 8-24, 26", "4-36, 38", "4-46, 48, 52", "4-56, 58, 60, 64", "4-70, 72, 78",
         "4-82, 84, 90", "4-94, 96, 104", "4-106, 108, 116", "4-118, 120, 130",
         "4-130, 132, 142", "4-142, 144, 156", "4-154, 156, 168"],
}


def parse_cell(text: str) -> frozenset:
    """``"4-6, 8"`` -> {4, 5, 6, 8}."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(part))
    return frozenset(out)


TABLE1 = {
    (m, 3 + j): parse_cell(cell)
    for m, row in TABLE1_TEXT.items()
    for j, cell in enumerate(row)
}
