import sys

from dsbr.apis.cli import main

sys.exit(main())
