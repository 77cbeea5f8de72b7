#!/usr/bin/env python3
"""
Launcher for the machine-minimization command line.

    python run_machmin.py gen --kind loose --n 30 --seed 3 --out inst.json
    python run_machmin.py run inst.json --alg hybrid
"""

import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from backend.app.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
