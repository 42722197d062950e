import sys

from greenlab.cli import main

sys.exit(main())
