import sys

from treefold.toolkit.cli import main

sys.exit(main())
