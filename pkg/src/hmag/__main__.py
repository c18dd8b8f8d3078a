import sys

from hmag.cli import main

sys.exit(main())
