"""API endpoints: the query runner and read-only views of the curated tables."""

from rest_framework import filters, status, viewsets
from rest_framework.exceptions import ValidationError
from rest_framework.response import Response
from rest_framework.views import APIView

from .models import KnownNegative, VerdictRecord
from .serializers import KnownNegativeSerializer, VerdictRecordSerializer
from .utils.queries import drain, run_query


class QueryView(APIView):
    """Run one versioned query document and return its result document.

    ``?save=true`` also stores the result as a VerdictRecord.
    """

    def post(self, request):
        try:
            result = drain(run_query(request.data))
        except ValidationError as exc:
            return Response({"errors": exc.detail}, status=status.HTTP_400_BAD_REQUEST)
        except ValueError as exc:
            return Response({"errors": [str(exc)]}, status=status.HTTP_400_BAD_REQUEST)
        if request.query_params.get("save", "").lower() == "true":
            VerdictRecord.objects.create(
                subcommand=result["query"]["subcommand"],
                query=result["query"],
                result=result,
                verdict=result["verdict"],
            )
        return Response(result)


class KnownNegativeViewSet(viewsets.ReadOnlyModelViewSet):
    """Curated manifolds whose fundamental group is not circularly orderable."""

    queryset = KnownNegative.objects.all()
    serializer_class = KnownNegativeSerializer
    filter_backends = [filters.SearchFilter, filters.OrderingFilter]
    search_fields = ["name", "identification"]
    ordering_fields = ["name"]


class VerdictRecordViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = VerdictRecord.objects.all()
    serializer_class = VerdictRecordSerializer
    filter_backends = [filters.SearchFilter, filters.OrderingFilter]
    search_fields = ["subcommand", "verdict"]
    ordering_fields = ["created", "subcommand"]
