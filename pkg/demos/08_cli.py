# The command line, driven from Python. Each call is what you would type
# after `csaindex` in a shell.

import os
import tempfile

from csaindex.cli import main
from csaindex.corpus import repetitive_corpus

with tempfile.TemporaryDirectory() as d:
    text = os.path.join(d, "corpus.txt")
    with open(text, "wb") as fh:
        fh.write(repetitive_corpus(base_len=5000, copies=40))
    pat = os.path.join(d, "medium.pat")
    idx = os.path.join(d, "corpus.csai")

    main(["gen-patterns", text, "-n", "50", "-m", "24", "--regime", "medium", "-o", pat])
    main(["build", text, "--scheme", "rlzsa", "-o", idx])
    main(["inspect", idx])
    main(["query", idx, pat, "--mode", "count"])
    main(["bench", idx, text, "--scheme", "lzend", "-p", pat, "--repetitions", "1"])
