import sys

from survmap.cli import main

sys.exit(main())
