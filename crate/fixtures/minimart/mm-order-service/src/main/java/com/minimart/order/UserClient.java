package com.minimart.order;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class UserClient {

    private final RestTemplate restTemplate = new RestTemplate();

    public String ownerName(String userId) {
        return restTemplate.getForObject(
                "http://mm-user-service/api/v1/users/" + userId, String.class);
    }
}
