from django.urls import include, path
from rest_framework.routers import DefaultRouter

from . import views

router = DefaultRouter()
router.register(r"known-negatives", views.KnownNegativeViewSet)
router.register(r"verdicts", views.VerdictRecordViewSet)

urlpatterns = [
    path("api/query/", views.QueryView.as_view(), name="query"),
    path("api/", include(router.urls)),
]
