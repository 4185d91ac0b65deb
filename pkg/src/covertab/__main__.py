import sys

from covertab.cli import main

sys.exit(main())
