"""Bundled dictionary for crossword generation: 500 common lowercase words.

Includes the classic sator/arepo/tenet/opera/rotas square so the blank 5x5
grid is soluble out of the box.
"""

WORDS = (
    "an", "as", "at", "be", "by", "do", "go", "he", "hi", "if", "in", "is",
    "it", "me", "my", "no", "of", "on", "or", "so", "to", "up", "us", "we",
    "air", "all", "and", "ant", "any", "ape", "arc", "arm", "art", "ash",
    "ask", "bad", "bag", "bar", "bat", "bed", "bee", "big", "bit", "box",
    "boy", "bus", "but", "buy", "cab", "can", "cap", "car", "cat", "cow",
    "cry", "cup", "cut", "day", "den", "dig", "dim", "dip", "dog", "dot",
    "dry", "ear", "eat", "egg", "end", "era", "eye", "fan", "far", "fat",
    "few", "fig", "fin", "fit", "fix", "fly", "fog", "for", "fox", "fun",
    "gap", "gas", "gem", "get", "got", "gum", "gut", "hat", "hen", "her",
    "him", "hit", "hot", "how", "hut", "ice", "ink", "jam", "jar", "jet",
    "able", "acid", "aged", "also", "area", "army", "away", "baby", "back",
    "ball", "band", "bank", "barn", "base", "bath", "bead", "bean", "bear",
    "beat", "bell", "belt", "bend", "best", "bird", "blue", "boat", "bolt",
    "bone", "book", "boot", "born", "both", "bowl", "bulk", "burn", "bush",
    "busy", "cake", "calm", "camp", "card", "care", "cart", "case", "cash",
    "cast", "cave", "cell", "chat", "chip", "city", "clay", "clip", "club",
    "coal", "coat", "code", "coin", "cold", "come", "cook", "cool", "cope",
    "copy", "cord", "core", "corn", "cost", "crew", "crop", "dark", "data",
    "date", "dawn", "days", "dead", "deal", "dear", "debt", "deep", "deer",
    "desk", "dial", "dice", "diet", "dirt", "dish", "dock", "does", "done",
    "door", "dose", "down", "draw", "drop", "drum", "duck", "dust", "duty",
    "each", "earn", "east", "easy", "edge", "else", "even", "ever", "exit",
    "face", "fact", "fade", "fail", "fair", "fall", "farm", "fast", "fate",
    "fear", "feed", "feel", "about", "above", "actor", "acute", "admit",
    "adopt", "after", "again", "agent", "agree", "ahead", "alarm", "album",
    "alert", "alike", "alive", "alone", "along", "alter", "among", "anger",
    "angle", "angry", "apart", "apple", "apply", "arena", "arepo", "argue",
    "arise", "armor", "arose", "array", "aside", "asset", "audio", "avoid",
    "awake", "award", "aware", "badly", "basic", "basis", "beach", "began",
    "begin", "being", "below", "bench", "berry", "birth", "black", "blade",
    "blame", "blank", "blast", "bleed", "blend", "bless", "blind", "block",
    "blood", "board", "boast", "bonus", "boost", "booth", "bound", "brain",
    "brand", "brave", "bread", "break", "breed", "brick", "bride", "brief",
    "bring", "broad", "broke", "brown", "brush", "build", "built", "bunch",
    "burst", "cabin", "cable", "candy", "canoe", "cargo", "carry", "catch",
    "cause", "chain", "chair", "chalk", "charm", "chart", "chase", "cheap",
    "check", "chess", "chest", "chief", "child", "china", "choir", "civil",
    "claim", "class", "clean", "clear", "clerk", "click", "cliff", "climb",
    "clock", "close", "cloth", "cloud", "coach", "coast", "color", "couch",
    "could", "count", "court", "cover", "crack", "craft", "crane", "crash",
    "cream", "crime", "cross", "crowd", "crown", "curve", "cycle", "daily",
    "dairy", "dance", "dated", "death", "debut", "delta", "dense", "depth",
    "devil", "diary", "dozen", "draft", "drain", "drama", "dream", "opera",
    "rotas", "sator", "tenet", "absorb", "accent", "accept", "access",
    "acting", "action", "active", "actual", "advice", "advise", "affect",
    "afford", "agency", "agenda", "almost", "always", "amount", "animal",
    "annual", "answer", "anyone", "appeal", "appear", "around", "arrive",
    "artist", "aspect", "assess", "assist", "assume", "attack", "attend",
    "august", "author", "autumn", "avenue", "backed", "barely", "battle",
    "beauty", "became", "become", "before", "behalf", "behind", "belief",
    "belong", "berlin", "better", "beyond", "bishop", "border", "bottle",
    "bottom", "bought", "branch", "breath", "bridge", "bright", "broken",
    "budget", "burden", "bureau", "button", "camera", "campus", "cancer",
    "cannot", "canvas", "carbon", "ability", "absence", "academy",
    "account", "accused", "achieve", "acquire", "address", "advance",
    "adverse", "advised", "adviser", "against", "airline", "airport",
    "alleged", "already", "analyst", "ancient", "another", "anxiety",
    "anybody", "applied", "arrange", "arrival", "article", "assault",
    "assumed", "assured", "attempt", "absolute", "accepted", "accident",
    "accuracy", "accurate", "achieved", "acquired", "activity", "actually",
    "addition", "adequate", "adjacent", "advanced", "advisory", "advocate",
    "affected",
)


def words_by_length() -> dict:
    out: dict = {}
    for w in WORDS:
        out.setdefault(len(w), []).append(w)
    return out
