from django.core.management.base import BaseCommand, CommandError

from toricstab.exceptions import UnknownFixture

from ...fixtures import fixture_document, fixture_names
from ...serializers import to_json


class Command(BaseCommand):
    help = 'Print a built-in polytope file, or list the built-in names.'
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('name', nargs='?')

    def handle(self, *args, **options):
        name = options['name']
        if name is None:
            self.stdout.write('\n'.join(fixture_names()))
            return
        try:
            document = fixture_document(name)
        except UnknownFixture as exc:
            raise CommandError(str(exc), returncode=exc.exit_code)
        self.stdout.write(to_json(document))
