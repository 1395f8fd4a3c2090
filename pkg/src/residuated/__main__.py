import sys

from residuated.cli import main

sys.exit(main())
